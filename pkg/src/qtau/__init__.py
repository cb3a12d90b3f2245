"""Tau functions of q-Painleve equations (VI, V, III1, III2, III3) from q-Nekrasov series."""

from .qcore import LogComplex, PoleError, QContext
from .tau import (
    DenominatorError,
    ParamsIII1,
    ParamsIII2,
    ParamsIII3,
    ParamsV,
    ParamsVI,
    TruncationSpec,
    tau,
    tau_shifted,
    zseries,
)

__all__ = [
    "DenominatorError",
    "LogComplex",
    "ParamsIII1",
    "ParamsIII2",
    "ParamsIII3",
    "ParamsV",
    "ParamsVI",
    "PoleError",
    "QContext",
    "TruncationSpec",
    "tau",
    "tau_shifted",
    "zseries",
]
