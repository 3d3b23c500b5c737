"""Face identification from directional binary codes on the Haar LL subband."""

from .dbc import FeatureVector, extract_features
from .dwt import SubbandSet, haar_dwt2, haar_idwt2
from .errors import DbcfrError
from .image import GrayImage, read_image, write_image
from .kernels import BACKEND
from .matcher import Gallery, MatchResult, euclidean, identify
from .pipeline import PipelineConfig, enroll_gallery, extract_image_features
from .preprocess import preprocess

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DbcfrError",
    "FeatureVector",
    "Gallery",
    "GrayImage",
    "MatchResult",
    "PipelineConfig",
    "SubbandSet",
    "__version__",
    "enroll_gallery",
    "euclidean",
    "extract_features",
    "extract_image_features",
    "haar_dwt2",
    "haar_idwt2",
    "identify",
    "preprocess",
    "read_image",
    "write_image",
]
