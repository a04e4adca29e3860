from .elements import Element, ElementRef, enumerate_elements
from .model import VisSpec, parse_vis_spec, validate_vis_spec, vis_from_dict
from .serialize import canonical_serialize

__all__ = [
    "Element",
    "ElementRef",
    "VisSpec",
    "canonical_serialize",
    "enumerate_elements",
    "parse_vis_spec",
    "validate_vis_spec",
    "vis_from_dict",
]
