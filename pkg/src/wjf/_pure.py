"""Pure-Python convolution kernels for packed-exponent term dictionaries.

A term dictionary maps a packed exponent key (one non-negative int encoding
four biased 16-bit fields) to a nonzero coefficient (int or Fraction).  The
packed key of the zero exponent is passed in as ``zero_key``; the key of a
product of monomials is ``ka + kb - zero_key``.

This module is the fallback backend.  ``wjf._speedups`` implements the same
two functions in compiled code; ``wjf._backend`` picks one at import time.
"""


def poly_mul(a, b, zero_key):
    """Multiply two term dictionaries, dropping cancelled terms."""
    if len(a) > len(b):
        a, b = b, a
    acc = {}
    get = acc.get
    for ka, va in a.items():
        off = ka - zero_key
        for kb, vb in b.items():
            k = off + kb
            acc[k] = get(k, 0) + va * vb
    return {k: v for k, v in acc.items() if v}


def series_mul(ca, cb, n_out, zero_key):
    """Convolve two lists of term dictionaries up to output order ``n_out``.

    Entry ``n`` of the result is ``sum_{i+j=n} ca[i]*cb[j]``.
    """
    la, lb = len(ca), len(cb)
    out = []
    for n in range(n_out + 1):
        acc = {}
        get = acc.get
        lo = n - lb + 1
        if lo < 0:
            lo = 0
        hi = n if n < la - 1 else la - 1
        for i in range(lo, hi + 1):
            ai = ca[i]
            bj = cb[n - i]
            if not ai or not bj:
                continue
            if len(ai) > len(bj):
                ai, bj = bj, ai
            for ka, va in ai.items():
                off = ka - zero_key
                for kb, vb in bj.items():
                    k = off + kb
                    acc[k] = get(k, 0) + va * vb
        out.append({k: v for k, v in acc.items() if v})
    return out
