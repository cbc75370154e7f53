"""AES-128 written out round by round, with CBC + PKCS#7 for whole payloads.

State layout follows FIPS-197: byte ``i`` of a block sits at row ``i % 4``,
column ``i // 4``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from stegano_ga.errors import IntegrityError

BLOCK = 16
ROUNDS = 10


def _xtime(a: int) -> int:
    a <<= 1
    return (a ^ 0x1B) & 0xFF if a & 0x100 else a


def _gmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a = _xtime(a)
        b >>= 1
    return out


def _build_sbox() -> tuple[list[int], list[int]]:
    inv = [0] * 256
    for a in range(1, 256):
        for b in range(1, 256):
            if _gmul(a, b) == 1:
                inv[a] = b
                break
    sbox = [0] * 256
    for a in range(256):
        x = inv[a]
        s = x
        for shift in range(1, 5):
            s ^= ((x << shift) | (x >> (8 - shift))) & 0xFF
        sbox[a] = s ^ 0x63
    inv_sbox = [0] * 256
    for a, s in enumerate(sbox):
        inv_sbox[s] = a
    return sbox, inv_sbox


SBOX, INV_SBOX = _build_sbox()
_MUL = {k: [_gmul(k, x) for x in range(256)] for k in (2, 3, 9, 11, 13, 14)}
_RCON = [0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36]

# destination i takes source _SHIFT[i]: row r rotates left by r columns
_SHIFT = [(i + 4 * (i % 4)) % 16 for i in range(16)]
_INV_SHIFT = [_SHIFT.index(i) for i in range(16)]


@dataclass(frozen=True)
class KeySchedule:
    round_keys: tuple[bytes, ...]

    def __post_init__(self) -> None:
        if len(self.round_keys) != ROUNDS + 1 or any(len(k) != BLOCK for k in self.round_keys):
            raise ValueError("AES-128 needs 11 round keys of 16 bytes")


@dataclass(frozen=True)
class CipherEnvelope:
    iv: bytes
    ciphertext: bytes

    def __post_init__(self) -> None:
        if len(self.iv) != BLOCK:
            raise ValueError("IV must be 16 bytes")
        if not self.ciphertext or len(self.ciphertext) % BLOCK:
            raise ValueError("ciphertext length must be a positive multiple of 16")


def derive_key(password: str) -> bytes:
    """First 16 bytes of SHA-256 over the UTF-8 password. Not a hardened KDF."""
    if not password:
        raise ValueError("password must be non-empty")
    return hashlib.sha256(password.encode("utf-8")).digest()[:BLOCK]


def expand_key(key: bytes) -> KeySchedule:
    if len(key) != BLOCK:
        raise ValueError(f"AES-128 key must be 16 bytes, got {len(key)}")
    words = [list(key[4 * i : 4 * i + 4]) for i in range(4)]
    for i in range(4, 4 * (ROUNDS + 1)):
        temp = list(words[i - 1])
        if i % 4 == 0:
            temp = temp[1:] + temp[:1]
            temp = [SBOX[b] for b in temp]
            temp[0] ^= _RCON[i // 4 - 1]
        words.append([a ^ b for a, b in zip(words[i - 4], temp)])
    return KeySchedule(tuple(bytes(sum(words[4 * r : 4 * r + 4], [])) for r in range(ROUNDS + 1)))


def add_round_key(state: list[int], round_key: bytes) -> list[int]:
    return [s ^ k for s, k in zip(state, round_key)]


def sub_bytes(state: list[int], box: list[int] = SBOX) -> list[int]:
    return [box[s] for s in state]


def shift_rows(state: list[int], inverse: bool = False) -> list[int]:
    order = _INV_SHIFT if inverse else _SHIFT
    return [state[j] for j in order]


def mix_columns(state: list[int], inverse: bool = False) -> list[int]:
    out = [0] * 16
    if inverse:
        m9, m11, m13, m14 = _MUL[9], _MUL[11], _MUL[13], _MUL[14]
        for c in range(0, 16, 4):
            a0, a1, a2, a3 = state[c : c + 4]
            out[c] = m14[a0] ^ m11[a1] ^ m13[a2] ^ m9[a3]
            out[c + 1] = m9[a0] ^ m14[a1] ^ m11[a2] ^ m13[a3]
            out[c + 2] = m13[a0] ^ m9[a1] ^ m14[a2] ^ m11[a3]
            out[c + 3] = m11[a0] ^ m13[a1] ^ m9[a2] ^ m14[a3]
    else:
        m2, m3 = _MUL[2], _MUL[3]
        for c in range(0, 16, 4):
            a0, a1, a2, a3 = state[c : c + 4]
            out[c] = m2[a0] ^ m3[a1] ^ a2 ^ a3
            out[c + 1] = a0 ^ m2[a1] ^ m3[a2] ^ a3
            out[c + 2] = a0 ^ a1 ^ m2[a2] ^ m3[a3]
            out[c + 3] = m3[a0] ^ a1 ^ a2 ^ m2[a3]
    return out


def encrypt_block(block: bytes, ks: KeySchedule) -> bytes:
    if len(block) != BLOCK:
        raise ValueError("block must be 16 bytes")
    keys = ks.round_keys
    state = add_round_key(list(block), keys[0])
    for rnd in range(1, ROUNDS):
        state = sub_bytes(state)
        state = shift_rows(state)
        state = mix_columns(state)
        state = add_round_key(state, keys[rnd])
    # final round skips MixColumns
    state = shift_rows(sub_bytes(state))
    return bytes(add_round_key(state, keys[ROUNDS]))


def decrypt_block(block: bytes, ks: KeySchedule) -> bytes:
    if len(block) != BLOCK:
        raise ValueError("block must be 16 bytes")
    keys = ks.round_keys
    state = add_round_key(list(block), keys[ROUNDS])
    state = sub_bytes(shift_rows(state, inverse=True), INV_SBOX)
    for rnd in range(ROUNDS - 1, 0, -1):
        state = add_round_key(state, keys[rnd])
        state = mix_columns(state, inverse=True)
        state = shift_rows(state, inverse=True)
        state = sub_bytes(state, INV_SBOX)
    return bytes(add_round_key(state, keys[0]))


def pkcs7_pad(data: bytes) -> bytes:
    n = BLOCK - len(data) % BLOCK
    return data + bytes([n]) * n


def pkcs7_unpad(data: bytes) -> bytes:
    if not data or len(data) % BLOCK:
        raise IntegrityError("padded data is not block aligned")
    n = data[-1]
    if not 1 <= n <= BLOCK or data[-n:] != bytes([n]) * n:
        raise IntegrityError("invalid padding: wrong password or corrupted payload")
    return data[:-n]


def cbc_encrypt(data: bytes, key: bytes, iv: bytes) -> bytes:
    """Unpadded CBC; ``data`` must already be block aligned."""
    if len(data) % BLOCK:
        raise ValueError("CBC input must be a multiple of 16 bytes")
    ks = expand_key(key)
    prev = iv
    out = bytearray()
    for off in range(0, len(data), BLOCK):
        block = bytes(a ^ b for a, b in zip(data[off : off + BLOCK], prev))
        prev = encrypt_block(block, ks)
        out += prev
    return bytes(out)


def cbc_decrypt(data: bytes, key: bytes, iv: bytes) -> bytes:
    if len(data) % BLOCK:
        raise ValueError("CBC input must be a multiple of 16 bytes")
    ks = expand_key(key)
    prev = iv
    out = bytearray()
    for off in range(0, len(data), BLOCK):
        block = data[off : off + BLOCK]
        out += bytes(a ^ b for a, b in zip(decrypt_block(block, ks), prev))
        prev = block
    return bytes(out)


def _random_iv(rng) -> bytes:
    # numpy Generator exposes .bytes, random.Random exposes .randbytes
    draw = getattr(rng, "bytes", None) or rng.randbytes
    return bytes(draw(BLOCK))


def encrypt_payload(plaintext: bytes, key: bytes, rng) -> CipherEnvelope:
    iv = _random_iv(rng)
    return CipherEnvelope(iv, cbc_encrypt(pkcs7_pad(plaintext), key, iv))


def decrypt_payload(env: CipherEnvelope, key: bytes) -> bytes:
    return pkcs7_unpad(cbc_decrypt(env.ciphertext, key, env.iv))
