"""Compiled inner loops: postfix expression evaluation and the shooting IVP.

Everything here works on plain arrays so a single compilation serves every
coefficient profile (profiles are passed as postfix programs, see
:func:`dampwave.expr.to_program`).
"""

import math

import numpy as np
from numba import njit

from .expr import (OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_LOG, OP_MUL,
                   OP_NEG, OP_POW, OP_SIN, OP_SQRT, OP_SUB, OP_X)

OK, STEP_UNDERFLOW, NON_FINITE, TOO_MANY_STEPS = 0, 1, 2, 3


@njit(cache=True)
def eval_program(ops, consts, x, stack):
    sp = 0
    for i in range(ops.shape[0]):
        op = ops[i]
        if op == OP_CONST:
            stack[sp] = consts[i]
            sp += 1
        elif op == OP_X:
            stack[sp] = x
            sp += 1
        elif op == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == OP_SIN:
            stack[sp - 1] = math.sin(stack[sp - 1])
        elif op == OP_COS:
            stack[sp - 1] = math.cos(stack[sp - 1])
        elif op == OP_EXP:
            stack[sp - 1] = math.exp(stack[sp - 1])
        elif op == OP_LOG:
            v = stack[sp - 1]
            stack[sp - 1] = math.log(v) if v > 0.0 else np.nan
        elif op == OP_SQRT:
            v = stack[sp - 1]
            stack[sp - 1] = math.sqrt(v) if v >= 0.0 else np.nan
        else:
            r = stack[sp - 1]
            l = stack[sp - 2]
            sp -= 1
            if op == OP_ADD:
                stack[sp - 1] = l + r
            elif op == OP_SUB:
                stack[sp - 1] = l - r
            elif op == OP_MUL:
                stack[sp - 1] = l * r
            elif op == OP_DIV:
                stack[sp - 1] = l / r if r != 0.0 else np.nan
            elif op == OP_POW:
                if r == math.floor(r):
                    if l == 0.0 and r < 0.0:
                        stack[sp - 1] = np.nan
                    else:
                        stack[sp - 1] = l**r
                elif l < 0.0:
                    stack[sp - 1] = np.nan
                else:
                    stack[sp - 1] = l**r
    return stack[0]


# Dormand-Prince 5(4)
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)


@njit(cache=True)
def _coeffs(x, lam, a_ops, a_c, b_ops, b_c, stack):
    a = eval_program(a_ops, a_c, x, stack)
    b = eval_program(b_ops, b_c, x, stack)
    return lam * lam + 2.0 * lam * a - b, 2.0 * lam + 2.0 * a


@njit(cache=True)
def _rhs(q, s, y0, y1, y2, y3):
    return y1, q * y0, y3, q * y2 + s * y0


@njit(cache=True)
def shoot(lam, a_ops, a_c, b_ops, b_c, depth, rtol, atol, max_steps):
    """Integrate u'' = (lam^2 + 2 lam a - b) u and its lam-derivative on [0, 1].

    State ``(u, u', v, v')`` with ``v = du/dlam``; ``u(0)=0, u'(0)=1``.
    The state is renormalised after each accepted step; the true solution
    is the returned state times ``exp(log_scale)``.

    Returns ``(u1, v1, log_scale, accepted_steps, status, x_at_exit)``.
    """
    stack = np.empty(max(depth, 1) + 2)
    y0 = 0j
    y1 = 1 + 0j
    y2 = 0j
    y3 = 0j
    log_scale = 0.0
    x = 0.0
    h = min(0.05, 0.25 / (abs(lam) + 1.0))
    beta = 0.04
    expo1 = 0.2 - 0.75 * beta
    err_old = 1e-4
    steps = 0
    tries = 0

    q, s = _coeffs(x, lam, a_ops, a_c, b_ops, b_c, stack)
    if not (math.isfinite(q.real) and math.isfinite(s.real)):
        return y0, y2, log_scale, steps, NON_FINITE, x
    k10, k11, k12, k13 = _rhs(q, s, y0, y1, y2, y3)

    while x < 1.0:
        if tries >= max_steps:
            return y0, y2, log_scale, steps, TOO_MANY_STEPS, x
        tries += 1
        last = False
        if x + h >= 1.0:
            h = 1.0 - x
            last = True
        if h < 1e-14:
            return y0, y2, log_scale, steps, STEP_UNDERFLOW, x

        q, s = _coeffs(x + C2 * h, lam, a_ops, a_c, b_ops, b_c, stack)
        k20, k21, k22, k23 = _rhs(q, s,
                                  y0 + h * A21 * k10, y1 + h * A21 * k11,
                                  y2 + h * A21 * k12, y3 + h * A21 * k13)
        q, s = _coeffs(x + C3 * h, lam, a_ops, a_c, b_ops, b_c, stack)
        k30, k31, k32, k33 = _rhs(q, s,
                                  y0 + h * (A31 * k10 + A32 * k20),
                                  y1 + h * (A31 * k11 + A32 * k21),
                                  y2 + h * (A31 * k12 + A32 * k22),
                                  y3 + h * (A31 * k13 + A32 * k23))
        q, s = _coeffs(x + C4 * h, lam, a_ops, a_c, b_ops, b_c, stack)
        k40, k41, k42, k43 = _rhs(q, s,
                                  y0 + h * (A41 * k10 + A42 * k20 + A43 * k30),
                                  y1 + h * (A41 * k11 + A42 * k21 + A43 * k31),
                                  y2 + h * (A41 * k12 + A42 * k22 + A43 * k32),
                                  y3 + h * (A41 * k13 + A42 * k23 + A43 * k33))
        q, s = _coeffs(x + C5 * h, lam, a_ops, a_c, b_ops, b_c, stack)
        k50, k51, k52, k53 = _rhs(
            q, s,
            y0 + h * (A51 * k10 + A52 * k20 + A53 * k30 + A54 * k40),
            y1 + h * (A51 * k11 + A52 * k21 + A53 * k31 + A54 * k41),
            y2 + h * (A51 * k12 + A52 * k22 + A53 * k32 + A54 * k42),
            y3 + h * (A51 * k13 + A52 * k23 + A53 * k33 + A54 * k43))
        xe = 1.0 if last else x + h
        q, s = _coeffs(xe, lam, a_ops, a_c, b_ops, b_c, stack)
        k60, k61, k62, k63 = _rhs(
            q, s,
            y0 + h * (A61 * k10 + A62 * k20 + A63 * k30 + A64 * k40 + A65 * k50),
            y1 + h * (A61 * k11 + A62 * k21 + A63 * k31 + A64 * k41 + A65 * k51),
            y2 + h * (A61 * k12 + A62 * k22 + A63 * k32 + A64 * k42 + A65 * k52),
            y3 + h * (A61 * k13 + A62 * k23 + A63 * k33 + A64 * k43 + A65 * k53))
        n0 = y0 + h * (B1 * k10 + B3 * k30 + B4 * k40 + B5 * k50 + B6 * k60)
        n1 = y1 + h * (B1 * k11 + B3 * k31 + B4 * k41 + B5 * k51 + B6 * k61)
        n2 = y2 + h * (B1 * k12 + B3 * k32 + B4 * k42 + B5 * k52 + B6 * k62)
        n3 = y3 + h * (B1 * k13 + B3 * k33 + B4 * k43 + B5 * k53 + B6 * k63)
        k70, k71, k72, k73 = _rhs(q, s, n0, n1, n2, n3)

        e0 = h * (E1 * k10 + E3 * k30 + E4 * k40 + E5 * k50 + E6 * k60 + E7 * k70)
        e1 = h * (E1 * k11 + E3 * k31 + E4 * k41 + E5 * k51 + E6 * k61 + E7 * k71)
        e2 = h * (E1 * k12 + E3 * k32 + E4 * k42 + E5 * k52 + E6 * k62 + E7 * k72)
        e3 = h * (E1 * k13 + E3 * k33 + E4 * k43 + E5 * k53 + E6 * k63 + E7 * k73)
        err = ((abs(e0) / (atol + rtol * max(abs(y0), abs(n0)))) ** 2
               + (abs(e1) / (atol + rtol * max(abs(y1), abs(n1)))) ** 2
               + (abs(e2) / (atol + rtol * max(abs(y2), abs(n2)))) ** 2
               + (abs(e3) / (atol + rtol * max(abs(y3), abs(n3)))) ** 2)
        err = math.sqrt(0.25 * err)
        if not math.isfinite(err):
            if not math.isfinite(q.real + q.imag + s.real + s.imag):
                return y0, y2, log_scale, steps, NON_FINITE, x
            h *= 0.2
            continue

        if err <= 1.0:
            steps += 1
            x = xe
            y0, y1, y2, y3 = n0, n1, n2, n3
            k10, k11, k12, k13 = k70, k71, k72, k73
            scale = max(max(abs(y0), abs(y1)), max(abs(y2), abs(y3)))
            if scale > 0.0:
                inv = 1.0 / scale
                y0 *= inv
                y1 *= inv
                y2 *= inv
                y3 *= inv
                k10 *= inv
                k11 *= inv
                k12 *= inv
                k13 *= inv
                log_scale += math.log(scale)
            err = max(err, 1e-10)
            fac = err**expo1 / err_old**beta
            fac = min(5.0, max(0.2, fac / 0.9))
            h = h / fac
            err_old = err
        else:
            h = h / min(5.0, 0.9 ** -1 * err**expo1)
    return y0, y2, log_scale, steps, OK, x
