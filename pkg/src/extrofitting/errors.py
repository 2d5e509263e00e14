"""Exception hierarchy shared by every module."""


class ExtrofitError(ValueError):
    """Base class for all errors raised by this package."""


class EmptyInput(ExtrofitError):
    pass


class InconsistentDimension(ExtrofitError):
    def __init__(self, line_no: int, expected: int, got: int):
        super().__init__(f"line {line_no}: expected {expected} values, got {got}")
        self.line_no = line_no


class UnparseableNumber(ExtrofitError):
    def __init__(self, line_no: int, detail: str = ""):
        msg = f"line {line_no}: unparseable number"
        super().__init__(f"{msg} ({detail})" if detail else msg)
        self.line_no = line_no


class DuplicateToken(ExtrofitError):
    def __init__(self, token: str):
        super().__init__(f"duplicate token {token!r}")
        self.token = token


class UnknownToken(ExtrofitError, KeyError):
    def __init__(self, token: str):
        ExtrofitError.__init__(self, f"unknown token {token!r}")
        self.token = token

    def __str__(self) -> str:
        return self.args[0]


class LabelOutOfRange(ExtrofitError):
    pass


class DegenerateInput(ExtrofitError):
    pass


class DegenerateLexicon(ExtrofitError):
    pass


class RankDeficient(ExtrofitError):
    pass


class BadDimension(ExtrofitError):
    pass


class SingularDenominator(ExtrofitError):
    pass


class PartitionMismatch(ExtrofitError):
    pass


class NonFiniteUpdate(ExtrofitError):
    pass


class ShapeMismatch(ExtrofitError):
    pass


class LengthMismatch(ExtrofitError):
    pass


class UnparseableLine(ExtrofitError):
    def __init__(self, line_no: int, detail: str = ""):
        msg = f"line {line_no}: cannot parse"
        super().__init__(f"{msg} ({detail})" if detail else msg)
        self.line_no = line_no


class WrongColumnCount(ExtrofitError):
    def __init__(self, line_no: int, expected: int, got: int):
        super().__init__(f"line {line_no}: expected {expected} columns, got {got}")
        self.line_no = line_no
