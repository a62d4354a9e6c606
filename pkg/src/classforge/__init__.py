"""Search for and verify certificates of ideal classes of prescribed order
in a sextic, a quartic and a cubic family of number fields."""
from .certificate import ClassOrderCertificate, MalformedCertificate, Verdict, parse, serialize, verify_certificate
from .family import Family
from .kernels import BACKEND
from .search import SearchConfig, run_search

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ClassOrderCertificate", "Family", "MalformedCertificate", "SearchConfig",
    "Verdict", "parse", "run_search", "serialize", "verify_certificate", "__version__",
]
