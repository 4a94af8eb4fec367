"""Exception hierarchy shared across the toolkit."""


class MlneError(Exception):
    """Base class for all toolkit errors."""


class ParseError(MlneError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class EmptyGraphError(MlneError):
    pass


class UnknownNodeError(MlneError):
    pass


class DimensionMismatchError(MlneError):
    pass


class CommunityTooLargeError(MlneError):
    pass


class ImportFormatError(MlneError):
    pass


class NoCommunitiesFoundError(MlneError):
    pass


class EmptyTrainingSetError(MlneError):
    pass


class DivergenceError(MlneError):
    pass


class SingleClassSplitError(MlneError):
    pass


class MissingNodeError(MlneError):
    pass


class ConfigError(MlneError):
    pass
