from elm.engine import ElmModel, fit_elm, predict, rmse, train_elm

__all__ = ["ElmModel", "fit_elm", "predict", "rmse", "train_elm"]
