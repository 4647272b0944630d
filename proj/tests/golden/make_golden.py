#!/usr/bin/env python3
"""Regenerates the byte fixtures with a writer independent of the C++ code."""
import json
import pathlib
import struct

HERE = pathlib.Path(__file__).resolve().parent


def tensor_bytes(dims, values):
    out = struct.pack("<I", len(dims)) + struct.pack(f"<{len(dims)}I", *dims)
    return out + struct.pack(f"<{len(values)}f", *values)


def features():
    values = [0.5, -1.25, 3.0, 1024.0, -0.0078125, 7.75]
    return b"TPKF" + struct.pack("<I", 1) + tensor_bytes([2, 3], values)


def weights():
    names = ["w_q", "w_k", "w_v", "w_o", "mlp_w1", "mlp_b1", "mlp_w2", "mlp_b2", "w_out", "b_out"]
    out = b"TPKW" + struct.pack("<II", 1, len(names))
    for i, name in enumerate(names):
        dims = [1] if name.endswith(("b1", "b2", "b_out")) else [1, 1]
        out += struct.pack("<I", len(name)) + name.encode("utf-8")
        out += tensor_bytes(dims, [0.25 * (i + 1) * (-1) ** i])
    return out


TINY_CONFIG = {
    "channels": 1, "grid_h": 2, "grid_w": 2, "scale": 2, "levels": 1,
    "heads": 1, "inner_dim": 1, "mlp_ratio": 1, "out_dim": 1, "query_mode": "interpolated",
}

if __name__ == "__main__":
    (HERE / "features_2x3.tpkf").write_bytes(features())
    (HERE / "weights_tiny.tpkw").write_bytes(weights())
    (HERE / "tiny_config.json").write_text(json.dumps(TINY_CONFIG, indent=2) + "\n")
