"""snowgt: low-rank video desnowing, degradation synthesis, metrics, and curation tooling."""

from .degrade import (
    DegradationLayer,
    RainSynthesis,
    SnowMask,
    SnowSynthesis,
    binarize,
    compose,
    residual,
    synth_rain_streaks,
    synth_snow_video,
)
from .lowrank import (
    BandpassSpec,
    ComponentSplit,
    QRule,
    SliceSvd,
    desnow_slice,
    desnow_video,
    filter_left_vectors,
    rank_projection,
    slice_svd,
    split_components,
)
from .metrics import (
    CompositeLosses,
    LossWeights,
    MaskConfusion,
    composite_losses,
    f_measure,
    gradient_l1_loss,
    gradient_magnitude,
    l1,
    loss_f,
    mask_confusion,
    psnr,
    ssim,
)
from .video_tensor import (
    SliceView,
    VideoTensor,
    extract_slice,
    join_quadrants,
    load_frames,
    replace_slice,
    save_frames,
    split_quadrants,
)
from .workspace import DesnowParams, Workspace

__version__ = "0.1.0"

__all__ = [
    "BandpassSpec",
    "ComponentSplit",
    "CompositeLosses",
    "DegradationLayer",
    "DesnowParams",
    "LossWeights",
    "MaskConfusion",
    "QRule",
    "RainSynthesis",
    "SliceSvd",
    "SliceView",
    "SnowMask",
    "SnowSynthesis",
    "VideoTensor",
    "Workspace",
    "binarize",
    "compose",
    "composite_losses",
    "desnow_slice",
    "desnow_video",
    "extract_slice",
    "f_measure",
    "filter_left_vectors",
    "gradient_l1_loss",
    "gradient_magnitude",
    "join_quadrants",
    "l1",
    "load_frames",
    "loss_f",
    "mask_confusion",
    "psnr",
    "rank_projection",
    "replace_slice",
    "residual",
    "save_frames",
    "slice_svd",
    "split_components",
    "split_quadrants",
    "ssim",
    "synth_rain_streaks",
    "synth_snow_video",
]
