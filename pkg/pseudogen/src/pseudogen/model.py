"""UNet that predicts the vortex-aperture shot from the open-aperture shot.

Four encoder and four decoder stages of paired 3x3 convolutions with
ReLU, 2x2 max-pool downsampling, transposed-convolution upsampling,
and encoder-to-decoder skip concatenation. No normalization layers.
The 1x1 head maps back to one channel; the final activation matches
the data regime: sigmoid for intensity images in [0, 1], relu for
non-negative gamma-compressed amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

FINAL_ACTIVATIONS = ("sigmoid", "relu")
STAGES = 4
DIVISOR = 2 ** STAGES


@dataclass(frozen=True)
class UNetConfig:
    base_channels: int = 64
    final_activation: str = "sigmoid"

    def __post_init__(self):
        if self.base_channels < 1:
            raise ValueError(f"base_channels must be >= 1, "
                             f"got {self.base_channels}")
        if self.final_activation not in FINAL_ACTIVATIONS:
            raise ValueError(f"final_activation must be one of "
                             f"{FINAL_ACTIVATIONS}, "
                             f"got {self.final_activation!r}")


def _block(cin: int, cout: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Conv2d(cin, cout, kernel_size=3, padding=1),
        nn.ReLU(inplace=True),
        nn.Conv2d(cout, cout, kernel_size=3, padding=1),
        nn.ReLU(inplace=True),
    )


class UNet(nn.Module):
    def __init__(self, config: UNetConfig | None = None):
        super().__init__()
        self.config = config or UNetConfig()
        c = self.config.base_channels
        widths = [c * 2 ** k for k in range(STAGES)]

        self.encoders = nn.ModuleList()
        cin = 1
        for w in widths:
            self.encoders.append(_block(cin, w))
            cin = w
        self.pool = nn.MaxPool2d(2)
        self.bottleneck = _block(widths[-1], widths[-1] * 2)

        self.upsamplers = nn.ModuleList()
        self.decoders = nn.ModuleList()
        cin = widths[-1] * 2
        for w in reversed(widths):
            self.upsamplers.append(
                nn.ConvTranspose2d(cin, w, kernel_size=2, stride=2))
            self.decoders.append(_block(2 * w, w))
            cin = w
        self.head = nn.Conv2d(widths[0], 1, kernel_size=1)

        # He init keeps activation variance roughly constant through the
        # unnormalized conv stack; the default shrinks it so far that the
        # head's pre-activations collapse onto its bias, which kills the
        # relu head at step 0.
        for m in self.modules():
            if isinstance(m, (nn.Conv2d, nn.ConvTranspose2d)):
                nn.init.kaiming_normal_(m.weight, nonlinearity="relu")
                nn.init.zeros_(m.bias)
        # Gentle start for the head: damped weights and a positive bias
        # keep a relu head alive through the first large updates (a dead
        # relu head has exactly-zero gradients and never recovers).
        with torch.no_grad():
            self.head.weight.mul_(0.05)
            self.head.bias.fill_(0.5)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.ndim != 4 or x.shape[1] != 1:
            raise ValueError(f"expected input [batch, 1, h, w], "
                             f"got {tuple(x.shape)}")
        if x.shape[2] % DIVISOR or x.shape[3] % DIVISOR:
            raise ValueError(f"spatial size {tuple(x.shape[2:])} must be "
                             f"divisible by {DIVISOR}")
        skips = []
        for enc in self.encoders:
            x = enc(x)
            skips.append(x)
            x = self.pool(x)
        x = self.bottleneck(x)
        for up, dec, skip in zip(self.upsamplers, self.decoders,
                                 reversed(skips)):
            x = up(x)
            x = dec(torch.cat([skip, x], dim=1))
        x = self.head(x)
        if self.config.final_activation == "sigmoid":
            return torch.sigmoid(x)
        return torch.relu(x)
