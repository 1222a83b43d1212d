class UnrecoverableError(ValueError):
    """Surviving symbols do not determine the message."""

    def __init__(self, message: str, rank: int | None = None, needed: int | None = None):
        super().__init__(message)
        self.rank = rank
        self.needed = needed


class GroupUnavailableError(ValueError):
    """A repair group has an erased member."""

    def __init__(self, message: str, erased: list[int] | None = None):
        super().__init__(message)
        self.erased = erased or []
