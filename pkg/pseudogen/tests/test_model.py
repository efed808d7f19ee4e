import pytest
import torch

from pseudogen import UNet, UNetConfig


class TestConfig:
    def test_defaults(self):
        cfg = UNetConfig()
        assert cfg.base_channels == 64
        assert cfg.final_activation == "sigmoid"

    @pytest.mark.parametrize("kwargs", [
        dict(base_channels=0),
        dict(final_activation="tanh"),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            UNetConfig(**kwargs)


class TestForward:
    def test_output_matches_input_shape(self):
        model = UNet(UNetConfig(base_channels=4))
        x = torch.rand(2, 1, 64, 64)
        assert model(x).shape == x.shape

    def test_sigmoid_head_range(self):
        model = UNet(UNetConfig(base_channels=2, final_activation="sigmoid"))
        with torch.no_grad():
            y = model(torch.rand(1, 1, 32, 32))
        assert float(y.min()) >= 0.0
        assert float(y.max()) <= 1.0

    def test_relu_head_nonnegative(self):
        model = UNet(UNetConfig(base_channels=2, final_activation="relu"))
        with torch.no_grad():
            y = model(10 * torch.rand(1, 1, 32, 32))
        assert float(y.min()) >= 0.0

    def test_rejects_multichannel(self):
        model = UNet(UNetConfig(base_channels=2))
        with pytest.raises(ValueError, match="batch, 1, h, w"):
            model(torch.rand(1, 3, 32, 32))

    def test_rejects_indivisible_size(self):
        model = UNet(UNetConfig(base_channels=2))
        with pytest.raises(ValueError, match="divisible"):
            model(torch.rand(1, 1, 40, 40))

    def test_channel_doubling(self):
        model = UNet(UNetConfig(base_channels=8))
        enc_out = [blk[2].out_channels for blk in model.encoders]
        assert enc_out == [8, 16, 32, 64]
        assert model.bottleneck[2].out_channels == 128
        assert model.head.kernel_size == (1, 1)

    def test_no_normalization_layers(self):
        model = UNet(UNetConfig(base_channels=2))
        norms = [m for m in model.modules()
                 if isinstance(m, (torch.nn.BatchNorm2d,
                                   torch.nn.GroupNorm,
                                   torch.nn.InstanceNorm2d,
                                   torch.nn.LayerNorm))]
        assert norms == []

    def test_seeded_init_is_reproducible(self):
        torch.manual_seed(3)
        a = UNet(UNetConfig(base_channels=2))
        torch.manual_seed(3)
        b = UNet(UNetConfig(base_channels=2))
        for pa, pb in zip(a.parameters(), b.parameters()):
            assert torch.equal(pa, pb)
