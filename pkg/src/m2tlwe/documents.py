"""Line-oriented text format for keys and ciphertexts.

A document is a ``key: value`` header followed by named sections::

    format: m2t-pub
    version: 1
    t: 11
    ...
    [W]
    (1,5) (0,12) ...
    [v]
    (0,3) (1,9) ...

Matrices are one row per line, vectors a single line, group elements are
written ``(alpha,k)`` and integers in decimal.  Parsing is strict, so
``serialize(parse(text)) == text`` for every accepted document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .baselines import (
    RegevCiphertext,
    RegevParams,
    RegevPublicKey,
    RegevSecretKey,
    SylowCiphertext,
    SylowParams,
    SylowPublicKey,
    SylowSecretKey,
)
from .errors import DocumentError
from .group import GroupParams, format_element, parse_element
from .scheme import Ciphertext, M2tParams, PublicKey, SecretKey

VERSION = "1"

_KEY_RE = re.compile(r"^([a-z0-9_]+): (\S.*)$")
_SECTION_RE = re.compile(r"^\[([A-Za-z0-9_]+)\]$")


@dataclass
class Document:
    format: str
    params: dict[str, str] = field(default_factory=dict)
    sections: dict[str, list[str]] = field(default_factory=dict)
    version: str = VERSION

    def serialize(self) -> str:
        lines = [f"format: {self.format}", f"version: {self.version}"]
        lines += [f"{k}: {v}" for k, v in self.params.items()]
        for name, body in self.sections.items():
            lines.append(f"[{name}]")
            lines.extend(body)
        return "\n".join(lines) + "\n"

    def param(self, key: str) -> str:
        try:
            return self.params[key]
        except KeyError:
            raise DocumentError(f"{self.format}: missing header field {key!r}") from None

    def section(self, name: str) -> list[str]:
        try:
            return self.sections[name]
        except KeyError:
            raise DocumentError(f"{self.format}: missing section [{name}]") from None


def parse(text: str) -> Document:
    if not text.endswith("\n"):
        raise DocumentError("document must end with a newline")
    lines = text[:-1].split("\n")
    header: dict[str, str] = {}
    sections: dict[str, list[str]] = {}
    current = None
    for lineno, line in enumerate(lines, 1):
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current in sections:
                raise DocumentError(f"line {lineno}: duplicate section [{current}]")
            sections[current] = []
            continue
        if current is not None:
            if not line or line != line.strip():
                raise DocumentError(f"line {lineno}: blank or padded payload line")
            sections[current].append(line)
            continue
        m = _KEY_RE.match(line)
        if not m or m.group(2) != m.group(2).rstrip():
            raise DocumentError(f"line {lineno}: expected 'key: value', got {line!r}")
        key, value = m.groups()
        if key in header:
            raise DocumentError(f"line {lineno}: duplicate header field {key!r}")
        header[key] = value
    keys = list(header)
    if keys[:2] != ["format", "version"]:
        raise DocumentError("document must start with 'format:' and 'version:'")
    fmt = header.pop("format")
    version = header.pop("version")
    if version != VERSION:
        raise DocumentError(f"unsupported version {version!r}")
    return Document(fmt, header, sections, version)


# --- field helpers ------------------------------------------------------------

def _int(doc: Document, key: str) -> int:
    value = doc.param(key)
    if not re.fullmatch(r"-?\d+", value):
        raise DocumentError(f"{doc.format}: field {key!r} is not an integer: {value!r}")
    return int(value)


def _float(doc: Document, key: str) -> float:
    try:
        return float(doc.param(key))
    except ValueError:
        raise DocumentError(f"{doc.format}: field {key!r} is not a number") from None


def _ints(line: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in line.split(" "))
    except ValueError:
        raise DocumentError(f"malformed integer row {line!r}") from None


def _elements(line: str, p: GroupParams) -> tuple:
    try:
        return tuple(parse_element(tok, p) for tok in line.split(" "))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _fmt_ints(values) -> str:
    return " ".join(str(v) for v in values)


def _fmt_elements(values) -> str:
    return " ".join(format_element(v) for v in values)


def _single(doc: Document, name: str) -> str:
    body = doc.section(name)
    if len(body) != 1:
        raise DocumentError(f"{doc.format}: section [{name}] must be a single line")
    return body[0]


def _check_len(doc: Document, what: str, got: int, want: int) -> None:
    if got != want:
        raise DocumentError(f"{doc.format}: {what} has length {got}, expected {want}")


# --- M_{2^t} scheme -------------------------------------------------------------

def _m2t_header(P: M2tParams) -> dict[str, str]:
    return {"t": str(P.t), "m": str(P.m), "n": str(P.n), "nc": str(P.n_c), "sigma": repr(float(P.sigma))}


def _m2t_params(doc: Document) -> M2tParams:
    try:
        return M2tParams(_int(doc, "t"), _int(doc, "m"), _int(doc, "n"), _int(doc, "nc"), _float(doc, "sigma"))
    except ValueError as exc:
        raise DocumentError(f"{doc.format}: invalid parameters: {exc}") from None


def _encode_m2t_pub(pk: PublicKey) -> Document:
    return Document("m2t-pub", _m2t_header(pk.params), {
        "W": [_fmt_elements(row) for row in pk.W],
        "v": [_fmt_elements(pk.v)],
    })


def _decode_m2t_pub(doc: Document) -> PublicKey:
    P = _m2t_params(doc)
    W = tuple(_elements(line, P.group) for line in doc.section("W"))
    _check_len(doc, "W", len(W), P.m)
    for row in W:
        _check_len(doc, "row of W", len(row), P.n)
    v = _elements(_single(doc, "v"), P.group)
    _check_len(doc, "v", len(v), P.m)
    return PublicKey(P, W, v)


def _encode_m2t_sec(sk: SecretKey) -> Document:
    return Document("m2t-sec", _m2t_header(sk.params), {"x": [_fmt_ints(sk.x)]})


def _decode_m2t_sec(doc: Document) -> SecretKey:
    P = _m2t_params(doc)
    x = _ints(_single(doc, "x"))
    _check_len(doc, "x", len(x), P.n)
    if any(not 0 <= xi < P.group.rho for xi in x):
        raise DocumentError(f"{doc.format}: secret entries must lie in [0, {P.group.rho})")
    return SecretKey(P, x)


def _encode_m2t_ct(ct: Ciphertext, t: int) -> Document:
    return Document("m2t-ct", {"t": str(t), "n": str(len(ct.w))}, {
        "w": [_fmt_elements(ct.w)],
        "c": [format_element(ct.c)],
    })


def _decode_m2t_ct(doc: Document) -> tuple[int, Ciphertext]:
    try:
        p = GroupParams(_int(doc, "t"))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    w = _elements(_single(doc, "w"), p)
    _check_len(doc, "w", len(w), _int(doc, "n"))
    (c,) = _elements(_single(doc, "c"), p)
    return p.t, Ciphertext(w, c)


# --- Regev ------------------------------------------------------------------------

def _regev_header(P: RegevParams) -> dict[str, str]:
    return {"n": str(P.n), "q": str(P.q), "m": str(P.m), "sigma": repr(float(P.sigma))}


def _regev_params(doc: Document) -> RegevParams:
    try:
        return RegevParams(_int(doc, "n"), _int(doc, "q"), _int(doc, "m"), _float(doc, "sigma"))
    except ValueError as exc:
        raise DocumentError(f"{doc.format}: invalid parameters: {exc}") from None


def _decode_regev_pub(doc: Document) -> RegevPublicKey:
    P = _regev_params(doc)
    A = tuple(_ints(line) for line in doc.section("A"))
    _check_len(doc, "A", len(A), P.m)
    for row in A:
        _check_len(doc, "row of A", len(row), P.n)
    b = _ints(_single(doc, "b"))
    _check_len(doc, "b", len(b), P.m)
    return RegevPublicKey(P, A, b)


def _decode_regev_sec(doc: Document) -> RegevSecretKey:
    P = _regev_params(doc)
    x = _ints(_single(doc, "x"))
    _check_len(doc, "x", len(x), P.n)
    return RegevSecretKey(P, x)


def _decode_regev_ct(doc: Document) -> tuple[int, RegevCiphertext]:
    a = _ints(_single(doc, "a"))
    _check_len(doc, "a", len(a), _int(doc, "n"))
    (c,) = _ints(_single(doc, "c"))
    return _int(doc, "q"), RegevCiphertext(a, c)


# --- Sylow ------------------------------------------------------------------------

def _sylow_header(P: SylowParams) -> dict[str, str]:
    return {"n": str(P.n), "q": str(P.q), "p": str(P.p), "g": str(P.g), "m": str(P.m),
            "sigma": repr(float(P.sigma))}


def _sylow_params(doc: Document) -> SylowParams:
    try:
        return SylowParams(_int(doc, "n"), _int(doc, "q"), _int(doc, "p"), _int(doc, "g"),
                           _int(doc, "m"), _float(doc, "sigma"))
    except ValueError as exc:
        raise DocumentError(f"{doc.format}: invalid parameters: {exc}") from None


def _decode_sylow_pub(doc: Document) -> SylowPublicKey:
    P = _sylow_params(doc)
    A = tuple(_ints(line) for line in doc.section("A"))
    _check_len(doc, "A", len(A), P.m)
    for row in A:
        _check_len(doc, "row of A", len(row), P.n)
    b = _ints(_single(doc, "b"))
    _check_len(doc, "b", len(b), P.m)
    return SylowPublicKey(P, A, b)


def _decode_sylow_sec(doc: Document) -> SylowSecretKey:
    P = _sylow_params(doc)
    x = _ints(_single(doc, "x"))
    _check_len(doc, "x", len(x), P.n)
    return SylowSecretKey(P, x)


def _decode_sylow_ct(doc: Document) -> tuple[int, SylowCiphertext]:
    a = _ints(_single(doc, "a"))
    _check_len(doc, "a", len(a), _int(doc, "n"))
    (c,) = _ints(_single(doc, "c"))
    return _int(doc, "p"), SylowCiphertext(a, c)


# --- dispatch ---------------------------------------------------------------------

def encode(obj, **context) -> Document:
    """Document for a key or ciphertext.

    Ciphertexts carry no parameters of their own, so pass the matching
    public key as ``pk=`` when encoding one.
    """
    if isinstance(obj, PublicKey):
        return _encode_m2t_pub(obj)
    if isinstance(obj, SecretKey):
        return _encode_m2t_sec(obj)
    if isinstance(obj, RegevPublicKey):
        return Document("regev-pub", _regev_header(obj.params), {
            "A": [_fmt_ints(row) for row in obj.A], "b": [_fmt_ints(obj.b)]})
    if isinstance(obj, RegevSecretKey):
        return Document("regev-sec", _regev_header(obj.params), {"x": [_fmt_ints(obj.x)]})
    if isinstance(obj, SylowPublicKey):
        return Document("sylow-pub", _sylow_header(obj.params), {
            "A": [_fmt_ints(row) for row in obj.A], "b": [_fmt_ints(obj.b)]})
    if isinstance(obj, SylowSecretKey):
        return Document("sylow-sec", _sylow_header(obj.params), {"x": [_fmt_ints(obj.x)]})
    pk = context.get("pk")
    if isinstance(obj, Ciphertext) and isinstance(pk, PublicKey):
        return _encode_m2t_ct(obj, pk.params.t)
    if isinstance(obj, RegevCiphertext) and isinstance(pk, RegevPublicKey):
        return Document("regev-ct", {"n": str(pk.params.n), "q": str(pk.params.q)}, {
            "a": [_fmt_ints(obj.a)], "c": [str(obj.c)]})
    if isinstance(obj, SylowCiphertext) and isinstance(pk, SylowPublicKey):
        P = pk.params
        return Document("sylow-ct", {"n": str(P.n), "q": str(P.q), "p": str(P.p), "g": str(P.g)}, {
            "a": [_fmt_ints(obj.a)], "c": [str(obj.c)]})
    raise TypeError(f"cannot encode {type(obj).__name__} (ciphertexts need pk=)")


_DECODERS = {
    "m2t-pub": _decode_m2t_pub,
    "m2t-sec": _decode_m2t_sec,
    "m2t-ct": _decode_m2t_ct,
    "regev-pub": _decode_regev_pub,
    "regev-sec": _decode_regev_sec,
    "regev-ct": _decode_regev_ct,
    "sylow-pub": _decode_sylow_pub,
    "sylow-sec": _decode_sylow_sec,
    "sylow-ct": _decode_sylow_ct,
}


def decode(doc: Document):
    """Key object for key documents; ``(modulus tag, ciphertext)`` for ciphertexts."""
    try:
        decoder = _DECODERS[doc.format]
    except KeyError:
        raise DocumentError(f"unknown document format {doc.format!r}") from None
    return decoder(doc)


def dumps(obj, **context) -> str:
    return encode(obj, **context).serialize()


def loads(text: str):
    return decode(parse(text))
