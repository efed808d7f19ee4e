import numpy as np
import pytest

from pseudogen import TensorFormatError, read_header, read_tensor, write_tensor


def test_roundtrip_bits(tmp_path):
    arr = np.random.default_rng(0).random((9, 13)).astype(np.float32)
    path = tmp_path / "a.pdt"
    write_tensor(path, arr, meta={"kind": "test"})
    back = read_tensor(path)
    assert back.dtype == np.float32
    assert np.array_equal(back, arr)
    assert read_header(path)["meta"] == {"kind": "test"}


def test_roundtrip_3d(tmp_path):
    arr = np.arange(24, dtype=np.float32).reshape(2, 3, 4)
    write_tensor(tmp_path / "b.pdt", arr)
    assert np.array_equal(read_tensor(tmp_path / "b.pdt"), arr)


def test_write_is_atomic(tmp_path):
    write_tensor(tmp_path / "c.pdt", np.zeros((4, 4), np.float32))
    assert [p.name for p in tmp_path.iterdir()] == ["c.pdt"]


def test_float64_input_is_cast(tmp_path):
    arr = np.random.default_rng(1).random((5, 5))
    write_tensor(tmp_path / "d.pdt", arr)
    assert np.array_equal(read_tensor(tmp_path / "d.pdt"),
                          arr.astype(np.float32))


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "e.pdt"
    write_tensor(path, np.zeros((4, 4), np.float32))
    raw = path.read_bytes()
    path.write_bytes(raw[:-7])
    with pytest.raises(TensorFormatError, match="payload bytes"):
        read_tensor(path)


@pytest.mark.parametrize("mangle", [
    lambda h: {**h, "magic": "NOPE"},
    lambda h: {**h, "dtype": "f64"},
    lambda h: {**h, "byte_order": "BE"},
    lambda h: {**h, "shape": []},
    lambda h: {**h, "shape": [4, -4]},
    lambda h: {**h, "shape": [1 << 21]},
    lambda h: {**h, "shape": "4x4"},
])
def test_bad_headers_rejected(tmp_path, mangle):
    import json
    path = tmp_path / "f.pdt"
    write_tensor(path, np.zeros((4, 4), np.float32))
    header = json.loads(path.read_bytes().split(b"\n", 1)[0])
    payload = path.read_bytes().split(b"\n", 1)[1]
    path.write_bytes(json.dumps(mangle(header)).encode() + b"\n" + payload)
    with pytest.raises(TensorFormatError):
        read_header(path)


def test_unterminated_header_rejected(tmp_path):
    path = tmp_path / "g.pdt"
    path.write_bytes(b'{"magic": "PDT1"')
    with pytest.raises(TensorFormatError, match="unterminated"):
        read_header(path)


def test_non_json_header_rejected(tmp_path):
    path = tmp_path / "h.pdt"
    path.write_bytes(b"not json\n" + b"\0" * 64)
    with pytest.raises(TensorFormatError, match="not JSON"):
        read_header(path)


def test_oversized_ndim_rejected(tmp_path):
    with pytest.raises(TensorFormatError, match="1-4D"):
        write_tensor(tmp_path / "i.pdt", np.zeros((1, 1, 1, 1, 1), np.float32))
