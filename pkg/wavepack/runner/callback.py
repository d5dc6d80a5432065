from abc import ABC


class Callback(ABC):
    def on_train_begin(self, info) -> None:
        pass  # do nothing

    def on_epoch_begin(self, info) -> None:
        pass  # do nothing

    def on_epoch_end(self, info) -> None:
        pass  # do nothing

    def on_train_end(self, info) -> None:
        pass  # do nothing

    # stop request from outside
    def intermediate_stop(self, info) -> bool:
        return False
