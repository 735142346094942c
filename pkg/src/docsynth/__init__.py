"""docsynth: synthetic document image generator with implicit layout labels.

Documents are sampled from a hierarchical network of random variables
(layout, style, content and defect nodes), composed onto page lattices,
rasterized, and exported together with bounding-box ground truth for every
layout element.
"""

__version__ = "0.1.0"
