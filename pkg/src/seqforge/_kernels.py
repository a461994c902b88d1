"""Compiled dynamic-programming kernels for pairwise alignment.

All kernels fill a full pointer matrix so traceback is exact. Pointer
codes for the linear kernels: 0 stop/origin, 1 diagonal, 2 up (consume
a, gap in b), 3 left (consume b, gap in a). Ties prefer diagonal, then
up, then left; local cells that cannot stay positive store 0.

The affine kernels pack three 2-bit pointer fields into one byte:
bits 0-1 for the match state M, 2-3 for the gap-in-b state X, 4-5 for
the gap-in-a state Y. Field values 1/2/3 name the predecessor state
(M/X/Y); in M, 0 marks a local fresh start.
"""

import numpy as np
from numba import njit

NEG = -(1 << 60)


@njit(cache=True)
def nw_fill(a, b, sub, gap):
    n = a.shape[0]
    m = b.shape[0]
    ptr = np.zeros((n + 1, m + 1), np.uint8)
    prev = np.empty(m + 1, np.int64)
    cur = np.empty(m + 1, np.int64)
    for j in range(m + 1):
        prev[j] = gap * j
        ptr[0, j] = 3
    ptr[0, 0] = 0
    for i in range(1, n + 1):
        cur[0] = gap * i
        ptr[i, 0] = 2
        for j in range(1, m + 1):
            d = prev[j - 1] + sub[a[i - 1], b[j - 1]]
            u = prev[j] + gap
            l = cur[j - 1] + gap
            h = d
            p = 1
            if u > h:
                h = u
                p = 2
            if l > h:
                h = l
                p = 3
            cur[j] = h
            ptr[i, j] = p
        tmp = prev
        prev = cur
        cur = tmp
    return ptr, prev[m]


@njit(cache=True)
def sw_fill(a, b, sub, gap):
    n = a.shape[0]
    m = b.shape[0]
    ptr = np.zeros((n + 1, m + 1), np.uint8)
    prev = np.zeros(m + 1, np.int64)
    cur = np.zeros(m + 1, np.int64)
    best = 0
    bi = 0
    bj = 0
    for i in range(1, n + 1):
        cur[0] = 0
        for j in range(1, m + 1):
            d = prev[j - 1] + sub[a[i - 1], b[j - 1]]
            u = prev[j] + gap
            l = cur[j - 1] + gap
            h = d
            p = 1
            if u > h:
                h = u
                p = 2
            if l > h:
                h = l
                p = 3
            if h <= 0:
                h = 0
                p = 0
            cur[j] = h
            ptr[i, j] = p
            if h > best:
                best = h
                bi = i
                bj = j
        tmp = prev
        prev = cur
        cur = tmp
    return ptr, bi, bj, best


@njit(cache=True)
def nw_fill_affine(a, b, sub, gap_open, gap_extend):
    n = a.shape[0]
    m = b.shape[0]
    ptr = np.zeros((n + 1, m + 1), np.uint8)
    mp = np.empty(m + 1, np.int64)  # previous row of M/X/Y
    xp = np.empty(m + 1, np.int64)
    yp = np.empty(m + 1, np.int64)
    mc = np.empty(m + 1, np.int64)
    xc = np.empty(m + 1, np.int64)
    yc = np.empty(m + 1, np.int64)
    mp[0] = 0
    xp[0] = NEG
    yp[0] = NEG
    for j in range(1, m + 1):
        mp[j] = NEG
        xp[j] = NEG
        yp[j] = gap_open + gap_extend * (j - 1)
        ptr[0, j] = (1 if j == 1 else 3) << 4
    for i in range(1, n + 1):
        mc[0] = NEG
        yc[0] = NEG
        xc[0] = gap_open + gap_extend * (i - 1)
        ptr[i, 0] = (1 if i == 1 else 2) << 2
        for j in range(1, m + 1):
            # M: ends with a[i-1] paired to b[j-1]
            best = mp[j - 1]
            code_m = 1
            if xp[j - 1] > best:
                best = xp[j - 1]
                code_m = 2
            if yp[j - 1] > best:
                best = yp[j - 1]
                code_m = 3
            mc[j] = best + sub[a[i - 1], b[j - 1]] if best > NEG else NEG
            # X: gap in b (consume a)
            best = mp[j] + gap_open
            code_x = 1
            if xp[j] + gap_extend > best:
                best = xp[j] + gap_extend
                code_x = 2
            if yp[j] + gap_open > best:
                best = yp[j] + gap_open
                code_x = 3
            xc[j] = best
            # Y: gap in a (consume b)
            best = mc[j - 1] + gap_open
            code_y = 1
            if xc[j - 1] + gap_open > best:
                best = xc[j - 1] + gap_open
                code_y = 2
            if yc[j - 1] + gap_extend > best:
                best = yc[j - 1] + gap_extend
                code_y = 3
            yc[j] = best
            ptr[i, j] = code_m | (code_x << 2) | (code_y << 4)
        tmp = mp
        mp = mc
        mc = tmp
        tmp = xp
        xp = xc
        xc = tmp
        tmp = yp
        yp = yc
        yc = tmp
    score = mp[m]
    state = 1
    if xp[m] > score:
        score = xp[m]
        state = 2
    if yp[m] > score:
        score = yp[m]
        state = 3
    return ptr, score, state


@njit(cache=True)
def sw_fill_affine(a, b, sub, gap_open, gap_extend):
    n = a.shape[0]
    m = b.shape[0]
    ptr = np.zeros((n + 1, m + 1), np.uint8)
    mp = np.empty(m + 1, np.int64)
    xp = np.empty(m + 1, np.int64)
    yp = np.empty(m + 1, np.int64)
    mc = np.empty(m + 1, np.int64)
    xc = np.empty(m + 1, np.int64)
    yc = np.empty(m + 1, np.int64)
    for j in range(m + 1):
        mp[j] = NEG
        xp[j] = NEG
        yp[j] = NEG
    best_score = 0
    bi = 0
    bj = 0
    for i in range(1, n + 1):
        mc[0] = NEG
        xc[0] = NEG
        yc[0] = NEG
        for j in range(1, m + 1):
            prev_best = 0  # fresh start
            code_m = 0
            if mp[j - 1] > prev_best:
                prev_best = mp[j - 1]
                code_m = 1
            if xp[j - 1] > prev_best:
                prev_best = xp[j - 1]
                code_m = 2
            if yp[j - 1] > prev_best:
                prev_best = yp[j - 1]
                code_m = 3
            mc[j] = prev_best + sub[a[i - 1], b[j - 1]]
            best = mp[j] + gap_open
            code_x = 1
            if xp[j] + gap_extend > best:
                best = xp[j] + gap_extend
                code_x = 2
            if yp[j] + gap_open > best:
                best = yp[j] + gap_open
                code_x = 3
            xc[j] = best
            best = mc[j - 1] + gap_open
            code_y = 1
            if xc[j - 1] + gap_open > best:
                best = xc[j - 1] + gap_open
                code_y = 2
            if yc[j - 1] + gap_extend > best:
                best = yc[j - 1] + gap_extend
                code_y = 3
            yc[j] = best
            ptr[i, j] = code_m | (code_x << 2) | (code_y << 4)
            if mc[j] > best_score:
                best_score = mc[j]
                bi = i
                bj = j
        tmp = mp
        mp = mc
        mc = tmp
        tmp = xp
        xp = xc
        xc = tmp
        tmp = yp
        yp = yc
        yc = tmp
    return ptr, bi, bj, best_score
