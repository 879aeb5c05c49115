from .noy import NoyObject, NoyPresentation, noy_hom, noy_kernel, noy_presentation, noy_tensor, vec_theta
from .complexes import Complex, ChainMap, cone, kb_hom, tensor_complexes, theta_delta, weak_kernel_kb

__all__ = [
    'NoyObject',
    'NoyPresentation',
    'noy_hom',
    'noy_kernel',
    'noy_tensor',
    'noy_presentation',
    'vec_theta',
    'Complex',
    'ChainMap',
    'cone',
    'weak_kernel_kb',
    'kb_hom',
    'tensor_complexes',
    'theta_delta'
]
