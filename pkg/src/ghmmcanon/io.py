"""JSON model files.

Schemas (all numbers are doubles, complex numbers are ``[re, im]`` pairs)::

    {"kind": "ghmm" | "hmm", "alphabet": [...], "eta0": [...], "ones": [...],
     "transitions": {"<symbol>": [[...]]}, "complex": false, "provenance": {...}}
    {"kind": "standard_ghmm", ... same fields ..., "history_words": [[...]],
     "future_words": [[...]]}
    {"kind": "qhmm", "alphabet": [...], "sigma0": [[[re, im], ...]],
     "kraus": {"<symbol>": [d x d complex matrices]}}
    {"kind": "unitary_qhmm", "d": ..., "trash": ..., "U": [[[re, im], ...]],
     "sigma0": ..., "alphabet": [...]}
"""

import json

import numpy as np

from .canonical import StandardGHMM
from .errors import ModelError
from .ghmm import GHMM, hmm_flags
from .qhmm import QHMM, UnitarySpec, kraus_from_unitary


def _enc_complex(a):
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _dec_complex(data):
    a = np.asarray(data, dtype=float)
    if a.shape[-1] != 2:
        raise ModelError("complex numbers must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def _enc_real_or_complex(a, is_complex):
    return _enc_complex(a) if is_complex else np.asarray(a, dtype=float).tolist()


def model_to_dict(model):
    if isinstance(model, StandardGHMM):
        out = model_to_dict(model.ghmm)
        out["kind"] = "standard_ghmm"
        out["history_words"] = [list(w) for w in model.history]
        out["future_words"] = [list(w) for w in model.future]
        return out
    if isinstance(model, GHMM):
        cx = model.is_complex
        return {
            "kind": "hmm" if hmm_flags(model).is_hmm else "ghmm",
            "alphabet": list(model.alphabet),
            "complex": cx,
            "eta0": _enc_real_or_complex(model.eta0, cx),
            "ones": _enc_real_or_complex(model.ones, cx),
            "transitions": {x: _enc_real_or_complex(model.transitions[x], cx) for x in model.alphabet},
            "provenance": model.provenance,
        }
    if isinstance(model, QHMM):
        return {
            "kind": "qhmm",
            "alphabet": list(model.alphabet),
            "sigma0": _enc_complex(model.sigma0),
            "kraus": {x: [_enc_complex(k) for k in model.kraus[x]] for x in model.alphabet},
        }
    raise ModelError(f"cannot serialize {type(model).__name__}")


def unitary_spec_to_dict(spec, sigma0, alphabet=None):
    return {
        "kind": "unitary_qhmm",
        "d": spec.memory_dim,
        "trash": spec.trash_dim,
        "U": _enc_complex(spec.U),
        "sigma0": _enc_complex(sigma0),
        "alphabet": list(alphabet) if alphabet is not None else [str(i) for i in range(spec.output_dim)],
    }


def model_from_dict(data):
    try:
        kind = data["kind"]
    except (KeyError, TypeError):
        raise ModelError("model document needs a 'kind' field") from None
    try:
        if kind in ("ghmm", "hmm", "standard_ghmm"):
            cx = bool(data.get("complex", False))
            dec = _dec_complex if cx else (lambda v: np.asarray(v, dtype=float))
            alphabet = [str(s) for s in data["alphabet"]]
            ones = data.get("ones")
            g = GHMM(
                alphabet,
                dec(data["eta0"]),
                {x: dec(data["transitions"][x]) for x in alphabet},
                None if ones is None else dec(ones),
                data.get("provenance"),
            )
            if kind == "standard_ghmm":
                return StandardGHMM(
                    g,
                    tuple(tuple(w) for w in data["history_words"]),
                    tuple(tuple(w) for w in data["future_words"]),
                )
            return g
        if kind == "qhmm":
            alphabet = [str(s) for s in data["alphabet"]]
            return QHMM(
                alphabet,
                _dec_complex(data["sigma0"]),
                {x: [_dec_complex(k) for k in data["kraus"][x]] for x in alphabet},
            )
        if kind == "unitary_qhmm":
            U = _dec_complex(data["U"])
            d, trash = int(data["d"]), int(data.get("trash", 1))
            n_out = U.shape[0] // (d * trash)
            spec = UnitarySpec(d, n_out, trash, U)
            return kraus_from_unitary(spec, _dec_complex(data["sigma0"]), data.get("alphabet"))
    except KeyError as exc:
        raise ModelError(f"model document is missing field {exc}") from None
    raise ModelError(f"unknown model kind {kind!r}")


def dumps(model, **kwargs):
    return json.dumps(model_to_dict(model), **kwargs)


def loads(text):
    return model_from_dict(json.loads(text))


def save(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON ({exc})") from None
    return model_from_dict(data)
