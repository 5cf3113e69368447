"""Breast cancer malignancy prediction from WDBC tumour measurements."""

from ._core import (
    Dataset,
    Error,
    Model,
    ValidationError,
    auc,
    binomial_two_sided_p,
    boruta_run,
    fit_logistic,
    parse_wdbc_csv,
    parse_wdbc_csv_text,
    pearson_correlation,
    predict_proba,
    roc_curve,
    sigmoid,
    smote_oversample,
    stratified_split,
    train,
)

__all__ = [
    "Dataset",
    "Error",
    "Model",
    "ValidationError",
    "auc",
    "binomial_two_sided_p",
    "boruta_run",
    "fit_logistic",
    "parse_wdbc_csv",
    "parse_wdbc_csv_text",
    "pearson_correlation",
    "predict_proba",
    "roc_curve",
    "sigmoid",
    "smote_oversample",
    "stratified_split",
    "train",
]
