"""Exception hierarchy shared across the toolkit."""


class AttnLensError(Exception):
    """Base class for all toolkit errors."""


# tokenizer
class ParseError(AttnLensError):
    pass


class InconsistentVocab(AttnLensError):
    pass


class EmptyInput(AttnLensError):
    pass


class UnknownToken(AttnLensError):
    pass


# model runtime / tensor formats
class MissingTensor(AttnLensError):
    def __init__(self, name):
        super().__init__(f"missing tensor: {name}")
        self.name = name


class ShapeError(AttnLensError):
    def __init__(self, name, expected, got):
        super().__init__(f"tensor {name!r}: expected shape {expected}, got {got}")
        self.name = name
        self.expected = tuple(expected)
        self.got = tuple(got)


class CorruptTensor(AttnLensError):
    pass


class FormatError(AttnLensError):
    pass


class InvalidAttention(AttnLensError):
    pass


class TokenIdOutOfRange(AttnLensError):
    pass


class SequenceTooLong(AttnLensError):
    pass


# scoring
class SelectorError(AttnLensError):
    pass


class NotRowStochastic(AttnLensError):
    pass


class AllWordsFiltered(AttnLensError):
    pass
