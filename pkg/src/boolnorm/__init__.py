"""Normality of Boolean functions: relative degrees, abnormality, quadratic sieving and bent expansion."""

__version__ = "0.1.0"

from .bent import (
    DicksonForm,
    SpectralClass,
    SpectralKind,
    are_complementary,
    dickson_form,
    dual,
    is_bent,
    is_near_bent,
    spectral_class,
)
from .core import Anf, BoolFun, WalshSpectrum, concat, mm_construct, restrict, walsh_spectrum
from .equiv import EACertificate, Fingerprint, fingerprint, verify_ea_certificate
from .exceptions import (
    BoolNormError,
    BudgetExceededError,
    CapacityError,
    DimensionError,
    DomainError,
    FormatError,
    InvalidCertificateError,
    InvalidFlatError,
    InvalidPermutationError,
    ParseError,
    SpectralError,
)
from .expand import admissible_set, expansion, key, normalize_prefix, zero_indicator
from .normality import (
    Normality,
    abnormality_witness,
    classify_normality,
    d_table,
    is_abnormal,
    r_degree,
    relative_degree,
)
from .sieve import QSet, QuadForm, sieving
from .spaces import Flat, Subspace, enumerate_flats, enumerate_subspaces, gaussian_binomial
