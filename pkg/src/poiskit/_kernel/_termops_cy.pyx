# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled mirror of ``_termops_py``.

Coefficients stay generic Python objects (Fraction or gmpy2.mpq); the win is
compiled dict/tuple traffic in the reduction inner loop. Semantics must match
the pure backend exactly — the backend consistency tests enforce this.
"""

BACKEND = "cython"


cdef inline tuple _shift(tuple e, tuple k):
    cdef Py_ssize_t n = len(e)
    cdef Py_ssize_t i
    cdef list out = [0] * n
    for i in range(n):
        out[i] = e[i] + k[i]
    return tuple(out)


def t_add(dict a, dict b):
    cdef dict out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = c
        else:
            s = s + c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def t_sub(dict a, dict b):
    cdef dict out = dict(a)
    for k, c in b.items():
        s = out.get(k)
        if s is None:
            out[k] = -c
        else:
            s = s - c
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def t_neg(dict a):
    cdef dict out = {}
    for k, c in a.items():
        out[k] = -c
    return out


def t_scale(dict a, c):
    cdef dict out = {}
    if not c:
        return out
    for k, v in a.items():
        out[k] = c * v
    return out


def t_mul(dict a, dict b):
    cdef dict out = {}
    if len(a) > len(b):
        a, b = b, a
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = _shift(<tuple> ka, <tuple> kb)
            s = out.get(k)
            if s is None:
                out[k] = ca * cb
            else:
                s = s + ca * cb
                if s:
                    out[k] = s
                else:
                    del out[k]
    return out


def t_axpy(dict a, c, tuple e, dict b):
    cdef dict out = dict(a)
    for kb, cb in b.items():
        k = _shift(e, <tuple> kb)
        s = out.get(k)
        if s is None:
            out[k] = c * cb
        else:
            s = s + c * cb
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def v_axpy(dict a, c, tuple e, dict b):
    cdef dict out = dict(a)
    cdef tuple kb
    for key, cb in b.items():
        kb = <tuple> key
        k = (kb[0], _shift(e, <tuple> kb[1]))
        s = out.get(k)
        if s is None:
            out[k] = c * cb
        else:
            s = s + c * cb
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def t_diff(dict a, Py_ssize_t i):
    cdef dict out = {}
    cdef list e
    for k, c in a.items():
        n = (<tuple> k)[i]
        if n:
            e = list(<tuple> k)
            e[i] = n - 1
            out[tuple(e)] = c * n
    return out


def t_eval(dict a, tuple point):
    total = None
    for k, c in a.items():
        term = c
        for e, x in zip(<tuple> k, point):
            if e:
                term = term * x**e
        total = term if total is None else total + term
    return 0 if total is None else total
