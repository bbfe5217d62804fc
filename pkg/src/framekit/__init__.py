"""Frames, K-frames and K⊕L-frames in finite-dimensional complex spaces."""

from .errors import *  # noqa: F401,F403
from .examples import InstanceKind, InstanceSpec, random_instance
from .frame_core import BoundsCertificate, FrameKind, FrameSequence, analysis, frame_bounds, frame_operator, synthesis
from .hilbert import DEFAULT_TOL, ToleranceConfig, douglas_constant, douglas_factor, psd_dominance, range_inclusion
from .kframe import KFrameCertificate, canonical_kdual, is_kframe, kframe_bounds, verify_kdual
from .superframe import SuperCheckReport, SuperFramePair, combine, is_super_klframe, split

__version__ = "0.1.0"
