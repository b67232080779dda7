"""Person re-identification from dominant color descriptors and dominant color regions."""

from .colorquant import quantize_image, quantize_pixel, rgb_to_hsv
from .descriptor import DcdSet, color_histogram, extract_centroid_dcds
from .evaluation import CmcCurve, RankedList, compute_cmc, evaluate_dataset, rank_gallery
from .imaging import ForegroundMask, ImageBuffer, decode_ppm, encode_ppm, full_mask, resize_nearest
from .matching import MatchParams, MatchScore, combined_score
from .regions import DominantColorRegion, Part, extract_dcrs
from .signature import ExtractionParams, PersonSignature, build_signature

__version__ = "0.1.0"

__all__ = [
    "CmcCurve",
    "DcdSet",
    "DominantColorRegion",
    "ExtractionParams",
    "ForegroundMask",
    "ImageBuffer",
    "MatchParams",
    "MatchScore",
    "Part",
    "PersonSignature",
    "RankedList",
    "build_signature",
    "color_histogram",
    "combined_score",
    "compute_cmc",
    "decode_ppm",
    "encode_ppm",
    "evaluate_dataset",
    "extract_centroid_dcds",
    "extract_dcrs",
    "full_mask",
    "quantize_image",
    "quantize_pixel",
    "rank_gallery",
    "resize_nearest",
    "rgb_to_hsv",
]
