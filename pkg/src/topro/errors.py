"""Exception hierarchy shared by all topro modules."""

from __future__ import annotations


class ToProError(Exception):
    """Base class for every error raised by this package."""


# -- corpus -------------------------------------------------------------------


class CorpusError(ToProError):
    pass


class UnknownTag(CorpusError):
    def __init__(self, line_no: int, tag: str):
        super().__init__(f"line {line_no}: unknown tag {tag!r}")
        self.line_no = line_no
        self.tag = tag


class RaggedLine(CorpusError):
    def __init__(self, line_no: int, n_fields: int):
        super().__init__(f"line {line_no}: expected 1 or 2 tab-separated fields, got {n_fields}")
        self.line_no = line_no
        self.n_fields = n_fields


class EmptyCorpus(CorpusError):
    def __init__(self, msg: str = "no sentences parsed"):
        super().__init__(msg)


# -- pvp ----------------------------------------------------------------------


class IndexOutOfRange(ToProError, IndexError):
    def __init__(self, index: int, length: int):
        super().__init__(f"token index {index} out of range for sentence of length {length}")
        self.index = index
        self.length = length


class UnknownTask(ToProError, KeyError):
    def __init__(self, task: str):
        super().__init__(f"unknown task {task!r} (expected 'panx' or 'udpos')")
        self.task = task

    def __str__(self) -> str:
        return self.args[0]


class MissingTags(ToProError):
    pass


class TemplateError(ToProError, ValueError):
    pass


class VerbalizerError(ToProError, ValueError):
    pass


# -- scoring ------------------------------------------------------------------


class ScoringError(ToProError):
    pass


class UnknownCandidate(ScoringError):
    def __init__(self, word: str):
        super().__init__(f"candidate word {word!r} is not known to the scorer")
        self.word = word


class BackendUnavailable(ScoringError):
    pass


class MaskSymbolMissing(ScoringError):
    pass


class MultiPieceCandidate(ScoringError):
    def __init__(self, word: str, pieces: int):
        super().__init__(f"candidate {word!r} spans {pieces} vocabulary pieces")
        self.word = word
        self.pieces = pieces


class GradientMismatch(ScoringError):
    def __init__(self, report):
        super().__init__(
            f"analytic and numeric gradients disagree: max relative error "
            f"{report.max_rel_error:.3e} at {report.worst_coordinate} "
            f"(tolerance {report.tolerance:.1e})"
        )
        self.report = report


# -- train --------------------------------------------------------------------


class TrainingError(ToProError):
    pass


class ZeroProbability(TrainingError, RuntimeWarning):
    """Issued as a warning: the probability is clamped and training goes on."""


class NonFiniteLoss(TrainingError):
    pass


class SeedRunError(TrainingError):
    def __init__(self, seed: int, cause: BaseException):
        super().__init__(f"run with seed {seed} failed: {cause}")
        self.seed = seed
        self.cause = cause


# -- eval ---------------------------------------------------------------------


class EvalError(ToProError):
    pass


class LengthMismatch(EvalError, ValueError):
    def __init__(self, n_gold: int, n_pred: int):
        super().__init__(f"gold has {n_gold} tags but prediction has {n_pred}")


class NoTargetLanguages(EvalError):
    pass


class LanguageSetMismatch(EvalError):
    pass


# -- cli / artifacts ----------------------------------------------------------


class UsageError(ToProError):
    pass


class ArtifactError(ToProError):
    pass
