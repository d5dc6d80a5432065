class InvariantError(RuntimeError):
    pass


class RankDeficiencyError(InvariantError):
    def __init__(self, row: int, residual: float):
        super().__init__(f"boundary row {row} lies in the span of the preceding rows (residual norm {residual:.3e})")
        self.row = row
        self.residual = residual


class NonFiniteLossError(InvariantError):
    def __init__(self, epoch: int, step: int, loss: float):
        super().__init__(f"non-finite loss {loss} at epoch {epoch}, step {step}")
        self.epoch = epoch
        self.step = step
        self.loss = loss


class DatasetError(ValueError):
    pass


class FormatError(ValueError):
    pass
