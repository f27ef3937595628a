"""NR-DCSK chaotic communication under sweep jamming.

Modules
-------
chaos      logistic-map chaos and NR-DCSK framing
channel    block Nakagami-m fading, AWGN and the linear sweep jammer
wavelets   periodic wavelet packet transform and threshold-based jamming removal
vmd        variational mode decomposition
ica        two-channel FastICA and its inverse
receivers  plain, WPD and VMD-ICA-WPD correlation receivers
sim        configuration, BER sweeps, spectrograms, CLI
"""

from .chaos import ChaosParams, ChaoticFrame, frames_to_stream, generate_chaos, modulate
from .channel import ChannelRealization, SweepJammerParams, apply_channel, linear_sweep
from .ica import FastICA2, fit_ica, inverse_ica, separate
from .receivers import PlainReceiver, VMDICAWPDReceiver, WPDReceiver, make_receiver
from .vmd import VMD, VmdParams, split_modes, vmd_decompose
from .wavelets import WPDJammingFilter, dejam, estimate_jamming, wpd_decompose, wpd_reconstruct

__version__ = "0.1.0"

__all__ = [
    "ChaosParams", "ChaoticFrame", "generate_chaos", "modulate", "frames_to_stream",
    "SweepJammerParams", "ChannelRealization", "apply_channel", "linear_sweep",
    "wpd_decompose", "wpd_reconstruct", "estimate_jamming", "dejam", "WPDJammingFilter",
    "VmdParams", "vmd_decompose", "split_modes", "VMD",
    "fit_ica", "separate", "inverse_ica", "FastICA2",
    "PlainReceiver", "WPDReceiver", "VMDICAWPDReceiver", "make_receiver",
]
