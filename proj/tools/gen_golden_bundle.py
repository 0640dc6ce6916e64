"""Generates the golden weights bundle and its reference output.

The forward pass here is written independently of the C++ kernels with
numpy, and is the oracle for the golden-bundle test. Run once; the outputs
are checked in under data/fixtures/.
"""

import json
import pathlib

import numpy as np

rng = np.random.default_rng(20240101)
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "fixtures"

C_IN, LEN = 3, 32
CONV_F, CONV_K = 4, 5
LSTM_U = 5
GRU_U = 3
CLASSES = ["walk", "sit", "stand", "lie"]


def u(*shape, scale=0.5):
    return rng.uniform(-scale, scale, size=shape)


conv_w = u(CONV_F, C_IN, CONV_K)
conv_b = u(CONV_F)
lstm_U = u(4, LSTM_U, CONV_F)  # gate order: output, input, forget, candidate
lstm_W = u(4, LSTM_U, LSTM_U)
lstm_b = u(4, LSTM_U)
gru_U = u(3, GRU_U, LSTM_U)  # gate order: update, reset, candidate
gru_W = u(3, GRU_U, GRU_U)
gru_b = u(3, GRU_U)
dense_w = u(len(CLASSES), GRU_U, scale=2.0)
dense_b = u(len(CLASSES))
norm_mean = np.array([0.1, 9.5, 0.3])
norm_std = np.array([2.0, 3.0, 1.5])
x_raw = np.stack([np.sin(np.arange(LEN) * 0.4 + c) * (3 + c) + 9.81 * (c == 1) for c in range(C_IN)])


def sig(v):
    return 1.0 / (1.0 + np.exp(-v))


def forward(x):
    x = (x - norm_mean[:, None]) / norm_std[:, None]
    L = x.shape[1] - CONV_K + 1
    y = np.zeros((CONV_F, L))
    for f in range(CONV_F):
        for t in range(L):
            y[f, t] = np.sum(conv_w[f] * x[:, t:t + CONV_K]) + conv_b[f]
    y = np.maximum(y, 0.0)
    P = (y.shape[1] - 2) // 2 + 1
    y = np.stack([[y[c, 2 * t:2 * t + 2].max() for t in range(P)] for c in range(CONV_F)])
    h = np.zeros(LSTM_U)
    s = np.zeros(LSTM_U)
    seq = []
    for t in range(y.shape[1]):
        pre = [lstm_W[g] @ h + lstm_U[g] @ y[:, t] + lstm_b[g] for g in range(4)]
        o, i, f = sig(pre[0]), sig(pre[1]), sig(pre[2])
        cand = sig(pre[3])
        s = f * s + i * cand
        h = o * sig(s)
        seq.append(h)
    g = np.zeros(GRU_U)
    for h_t in seq:
        z = sig(gru_W[0] @ g + gru_U[0] @ h_t + gru_b[0])
        r = sig(gru_W[1] @ g + gru_U[1] @ h_t + gru_b[1])
        cand = np.tanh(gru_W[2] @ (r * g) + gru_U[2] @ h_t + gru_b[2])
        g = (1 - z) * g + z * cand
    logits = dense_w @ g + dense_b
    e = np.exp(logits - logits.max())
    return e / e.sum()


def flat(*arrays):
    return [float(v) for a in arrays for v in np.ravel(a)]


bundle = {
    "format": "ambiact.bundle.v1",
    "input_len": LEN,
    "input_channels": C_IN,
    "class_names": CLASSES,
    "feature_norm": {"mean": flat(norm_mean), "std": flat(norm_std)},
    "layers": [
        {"kind": "conv1d", "params": {"filters": CONV_F, "kernel_size": CONV_K, "stride": 1, "in_channels": C_IN},
         "weights": flat(conv_w), "bias": flat(conv_b)},
        {"kind": "relu"},
        {"kind": "maxpool1d", "params": {"pool_size": 2, "stride": 2}},
        {"kind": "lstm", "params": {"units": LSTM_U, "input_size": CONV_F, "return_sequences": True,
                                    "cell_activation": "sigmoid"},
         "weights": flat(lstm_U, lstm_W), "bias": flat(lstm_b)},
        {"kind": "gru", "params": {"units": GRU_U, "input_size": LSTM_U, "return_sequences": False},
         "weights": flat(gru_U, gru_W), "bias": flat(gru_b)},
        {"kind": "dropout", "params": {"rate": 0.2}},
        {"kind": "dense", "params": {"units": len(CLASSES), "inputs": GRU_U},
         "weights": flat(dense_w), "bias": flat(dense_b)},
        {"kind": "softmax"},
    ],
}

expected = {"input": [flat(row) for row in x_raw], "probabilities": flat(forward(x_raw))}

OUT.mkdir(parents=True, exist_ok=True)
(OUT / "golden_bundle.json").write_text(json.dumps(bundle, indent=1) + "\n")
(OUT / "golden_expected.json").write_text(json.dumps(expected, indent=1) + "\n")
print(expected["probabilities"])
