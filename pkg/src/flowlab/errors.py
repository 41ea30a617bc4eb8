"""Exception types shared across flowlab."""


class FlowlabError(Exception):
    """Base error. ``code`` is a short stable identifier such as ``"exp-overflow"``."""

    code = "error"

    def __init__(self, code, message=None, **info):
        self.code = code
        self.info = info
        super().__init__(f"{code}: {message}" if message else code)


class DomainError(FlowlabError):
    """An expression or trajectory left the domain of definition."""

    def __init__(self, message=None, **info):
        super().__init__("domain-error", message, **info)


class ParseError(FlowlabError):
    def __init__(self, code, message, offset):
        self.offset = offset
        super().__init__(code, f"{message} (at offset {offset})", offset=offset)
