class VsatlinkError(Exception):
    """Base class for every error raised by the simulator."""


class ParameterError(VsatlinkError, ValueError):
    pass


class FramingError(VsatlinkError, ValueError):
    pass


class InsufficientDataError(VsatlinkError, ValueError):
    pass


class ConfigError(VsatlinkError):
    """Scenario or sweep configuration rejected.

    `errors` holds one diagnostic per offending key, formatted as
    "<section>.<key>: <constraint>".
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class PipelineError(VsatlinkError):
    def __init__(self, stage, cause):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage} stage failed: {cause}")
