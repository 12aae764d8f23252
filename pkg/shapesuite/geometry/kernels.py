"""Contains the compiled raster kernels shared by the geometry and morphology packages."""
import numba
import numpy as np

# 8邻域偏移，顺序为 N, NE, E, SE, S, SW, W, NW，对应邻域编码的第0到7位
NEIGHBOR_OFFSETS = np.array([(-1, 0), (-1, 1), (0, 1), (1, 1),
                             (1, 0), (1, -1), (0, -1), (-1, -1)], dtype=np.int64)


def _count_components(cells, adjacency):
    seen = set()
    count = 0
    for start in cells:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            r, c = stack.pop()
            for other in cells:
                if other in seen:
                    continue
                dr, dc = abs(other[0] - r), abs(other[1] - c)
                if (adjacency == 8 and max(dr, dc) == 1) or (adjacency == 4 and dr + dc == 1):
                    seen.add(other)
                    stack.append(other)
    return count


def _touching_background_components(background):
    """与中心4邻接的背景4连通分量个数"""
    seen = set()
    count = 0
    for start in background:
        if start in seen:
            continue
        component = {start}
        stack = [start]
        while stack:
            r, c = stack.pop()
            for other in background:
                if other not in component and abs(other[0] - r) + abs(other[1] - c) == 1:
                    component.add(other)
                    stack.append(other)
        seen |= component
        if any(abs(r) + abs(c) == 1 for r, c in component):
            count += 1
    return count


def _build_simple_lut():
    lut = np.zeros(256, dtype=np.bool_)
    for code in range(256):
        foreground = [tuple(NEIGHBOR_OFFSETS[b]) for b in range(8) if code >> b & 1]
        background = [tuple(NEIGHBOR_OFFSETS[b]) for b in range(8) if not code >> b & 1]
        lut[code] = (_count_components(foreground, 8) == 1
                     and _touching_background_components(background) == 1)
    return lut


# 简单点查找表：前景8连通、背景4连通下删除该像素不改变拓扑
SIMPLE_LUT = _build_simple_lut()
POPCOUNT = np.array([bin(code).count('1') for code in range(256)], dtype=np.int64)


@numba.njit(cache=True, nogil=True)
def neighbor_code(img, r, c):
    code = 0
    if img[r - 1, c]:
        code |= 1
    if img[r - 1, c + 1]:
        code |= 2
    if img[r, c + 1]:
        code |= 4
    if img[r + 1, c + 1]:
        code |= 8
    if img[r + 1, c]:
        code |= 16
    if img[r + 1, c - 1]:
        code |= 32
    if img[r, c - 1]:
        code |= 64
    if img[r - 1, c - 1]:
        code |= 128
    return code


@numba.njit(cache=True, nogil=True)
def squared_edt(mask):
    """Meijster两遍扫描计算精确的平方欧氏距离，mask四周必须有一圈背景"""
    rows, cols = mask.shape
    g = np.zeros((rows, cols), dtype=np.int64)
    # 第一遍：按列计算到最近背景的竖直距离
    for c in range(cols):
        if mask[0, c]:
            g[0, c] = rows + cols
        for r in range(1, rows):
            if mask[r, c]:
                g[r, c] = g[r - 1, c] + 1
            else:
                g[r, c] = 0
        for r in range(rows - 2, -1, -1):
            if g[r + 1, c] < g[r, c]:
                g[r, c] = g[r + 1, c] + 1
    squared = g * g
    out = np.zeros((rows, cols), dtype=np.int64)
    s = np.zeros(cols, dtype=np.int64)
    t = np.zeros(cols, dtype=np.int64)
    # 第二遍：按行求抛物线下包络
    for r in range(rows):
        f = squared[r]
        q = 0
        s[0] = 0
        t[0] = 0
        for u in range(1, cols):
            while q >= 0 and (t[q] - s[q]) ** 2 + f[s[q]] > (t[q] - u) ** 2 + f[u]:
                q -= 1
            if q < 0:
                q = 0
                s[0] = u
            else:
                w = 1 + (u * u - s[q] * s[q] + f[u] - f[s[q]]) // (2 * (u - s[q]))
                if w < cols:
                    q += 1
                    s[q] = u
                    t[q] = w
        for u in range(cols - 1, -1, -1):
            out[r, u] = (u - s[q]) ** 2 + f[s[q]]
            if u == t[q]:
                q -= 1
    return out


@numba.njit(cache=True, nogil=True)
def guided_thinning(img, order, keep, simple_lut, popcount, preserve_endpoints):
    """按给定顺序反复删除非保留的简单点，直到没有变化，img四周必须有一圈背景

    :return: 删除的像素数量
    """
    cols = img.shape[1]
    removed = 0
    changed = True
    while changed:
        changed = False
        for k in range(order.shape[0]):
            idx = order[k]
            r = idx // cols
            c = idx % cols
            if img[r, c] == 0 or keep[r, c]:
                continue
            code = neighbor_code(img, r, c)
            if not simple_lut[code]:
                continue
            if preserve_endpoints and popcount[code] < 2:
                continue
            img[r, c] = 0
            removed += 1
            changed = True
    return removed


@numba.njit(cache=True, nogil=True)
def downhill_reconstruct(marker, mask):
    """Robinson-Whelan下坡滤波，单遍计算8连通的膨胀重建，要求marker<=mask且均为非负整数"""
    rows, cols = marker.shape
    n = rows * cols
    out = marker.copy().reshape(n)
    limit = mask.reshape(n)
    max_level = 0
    for i in range(n):
        if out[i] > max_level:
            max_level = out[i]
    head = np.full(max_level + 1, -1, dtype=np.int64)
    nxt = np.full(n, -1, dtype=np.int64)
    prv = np.full(n, -1, dtype=np.int64)
    listed = np.zeros(n, dtype=np.bool_)
    done = np.zeros(n, dtype=np.bool_)
    for i in range(n - 1, -1, -1):
        level = out[i]
        nxt[i] = head[level]
        if head[level] != -1:
            prv[head[level]] = i
        head[level] = i
        listed[i] = True
    for level in range(max_level, 0, -1):
        while head[level] != -1:
            p = head[level]
            head[level] = nxt[p]
            if nxt[p] != -1:
                prv[nxt[p]] = -1
            nxt[p] = -1
            listed[p] = False
            done[p] = True
            r = p // cols
            c = p % cols
            for dr in range(-1, 2):
                for dc in range(-1, 2):
                    if dr == 0 and dc == 0:
                        continue
                    rr = r + dr
                    cc = c + dc
                    if rr < 0 or rr >= rows or cc < 0 or cc >= cols:
                        continue
                    q = rr * cols + cc
                    if done[q]:
                        continue
                    value = level if level < limit[q] else limit[q]
                    if value <= out[q]:
                        continue
                    # 从原来的桶中取出
                    if listed[q]:
                        if prv[q] != -1:
                            nxt[prv[q]] = nxt[q]
                        else:
                            head[out[q]] = nxt[q]
                        if nxt[q] != -1:
                            prv[nxt[q]] = prv[q]
                    out[q] = value
                    nxt[q] = head[value]
                    prv[q] = -1
                    if head[value] != -1:
                        prv[head[value]] = q
                    head[value] = q
                    listed[q] = True
    return out.reshape(rows, cols)
