from molgrating.models.dimer import DimerModel
from molgrating.models.exponential import (
    ExponentialModel,
    calibrate_to_x2,
    exponential_from_binding,
    exponential_model,
)
from molgrating.models.tabulated import TabulatedModel, load_tabulated, save_tabulated


def size_measures(model: DimerModel):
    return model.size_measures()


def form_factor(model: DimerModel, q: float) -> float:
    return model.form_factor(q)


def transverse_density(model: DimerModel, x2: float) -> float:
    return model.transverse_density(x2)


__all__ = [
    # base
    "DimerModel",
    # exponential
    "ExponentialModel",
    "calibrate_to_x2",
    "exponential_from_binding",
    "exponential_model",
    # tabulated
    "TabulatedModel",
    "load_tabulated",
    "save_tabulated",
    # functional forms
    "form_factor",
    "size_measures",
    "transverse_density",
]
