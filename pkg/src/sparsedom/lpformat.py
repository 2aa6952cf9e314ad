"""Minimal writer for CPLEX LP-format model files."""

from __future__ import annotations

from typing import Iterable, Sequence

Term = tuple[int, str]

_WRAP = 8


def _linear(terms: Sequence[Term]) -> list[str]:
    parts = []
    for i, (coef, var) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        if i == 0:
            parts.append(body if sign == "+" else f"- {body}")
        else:
            parts.append(f"{sign} {body}")
    return parts or ["0"]


def _wrap(head: str, parts: list[str]) -> list[str]:
    lines = []
    for i in range(0, len(parts), _WRAP):
        chunk = " ".join(parts[i:i + _WRAP])
        lines.append((head if i == 0 else " " * len(head)) + chunk)
    return lines


class LinearModel:
    """Accumulates an LP-format model and renders it deterministically.

    Quadratic objective terms use the ``[ ... ] / 2`` convention, so their
    coefficients are doubled on output.
    """

    def __init__(self, title: str):
        self.title = title
        self._comments: list[str] = []
        self._linear: list[Term] = []
        self._quad: list[tuple[int, str, str]] = []
        self._rows: list[str] = []
        self._binaries: list[str] = []
        self.num_constraints = 0

    def comment(self, text: str) -> None:
        self._comments.append(text)

    def linear_objective(self, terms: Iterable[Term]) -> None:
        self._linear.extend(terms)

    def quadratic_objective(self, terms: Iterable[tuple[int, str, str]]) -> None:
        """Add ``coef * a * b`` terms; ``a == b`` renders as a square."""
        self._quad.extend(terms)

    def constraint(self, name: str, terms: Sequence[Term], sense: str, rhs: int) -> None:
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"bad constraint sense {sense!r}")
        self._rows.extend(_wrap(f" {name}: ", _linear(terms) + [sense, str(rhs)]))
        self.num_constraints += 1

    def binaries(self, names: Iterable[str]) -> None:
        self._binaries.extend(names)

    def render(self) -> str:
        out = [f"\\ {self.title}"]
        out += [f"\\ {c}" for c in self._comments]
        out.append("Minimize")
        parts = _linear(self._linear) if self._linear else []
        if self._quad:
            q = []
            for i, (coef, a, b) in enumerate(self._quad):
                c = 2 * coef
                body = f"{a} ^2" if a == b else f"{a} * {b}"
                if abs(c) != 1:
                    body = f"{abs(c)} {body}"
                if i == 0:
                    q.append(body if c > 0 else f"- {body}")
                else:
                    q.append(("- " if c < 0 else "+ ") + body)
            if parts:
                parts.append("+")
            parts += ["["] + q + ["]", "/", "2"]
        out += _wrap(" obj: ", parts or ["0"])
        out.append("Subject To")
        out += self._rows
        if self._binaries:
            out.append("Binary")
            out += _wrap(" ", self._binaries)
        out.append("End")
        return "\n".join(out) + "\n"
