"""Error type shared by every module; ``code`` is a stable identifier used by the CLI."""


class OdoError(Exception):
    """Mathematical or domain error raised by the kernel.

    ``code`` is one of the stable names (``DIVISION_BY_ZERO``, ``NOT_COMMUTING``, ...)
    listed in the README; the message is for humans.
    """

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message
