class RefusalError(RuntimeError):
    """An exact oracle was asked to solve an instance above its size limit."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: instance size {size} exceeds limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit
