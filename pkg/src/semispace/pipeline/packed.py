"""Packed configurations for fast search over one-tape machines.

A configuration is one ``bytes`` object: the head state (2 bytes), the
length of the left side (2 bytes), then every tape symbol in 2 bytes.
Commands are indexed by head state and the symbol next to the head, so a
step costs a couple of dict lookups and byte slices.
"""

from __future__ import annotations

from ..machine import Machine, Tape


def _u16(i: int) -> bytes:
    return i.to_bytes(2, "big")


class PackedMachine:
    def __init__(self, m: Machine):
        if m.k != 1:
            raise ValueError("packing applies to one-tape machines")
        (t,) = m.tapes
        self.machine = m
        self.symbols = list(dict.fromkeys(t.letters + t.states))
        self.code = {s: _u16(i) for i, s in enumerate(self.symbols)}
        free, by_left, by_right = {}, {}, {}
        for c in m.commands:
            (p,) = c.parts
            rule = (self._word(p.left), self._word(p.right), self._word(p.new_left),
                    self._word(p.new_right), p.anchor_left, p.anchor_right, self.code[p.new_state])
            q = self.code[p.state]
            if p.left:
                by_left.setdefault(q + self.code[p.left[-1]], []).append(rule)
            elif p.right:
                by_right.setdefault(q + self.code[p.right[0]], []).append(rule)
            else:
                free.setdefault(q, []).append(rule)
        self._free, self._by_left, self._by_right = free, by_left, by_right

    def _word(self, w) -> bytes:
        return b"".join(self.code[x] for x in w)

    def pack(self, config) -> bytes:
        (t,) = config
        return self.code[t.state] + _u16(len(t.left)) + self._word(t.left) + self._word(t.right)

    def unpack(self, b: bytes):
        sym = self.symbols
        n = int.from_bytes(b[2:4], "big")
        word = [sym[int.from_bytes(b[i:i + 2], "big")] for i in range(4, len(b), 2)]
        return (Tape(tuple(word[:n]), sym[int.from_bytes(b[:2], "big")], tuple(word[n:])),)

    @staticmethod
    def size(b: bytes) -> int:
        return (len(b) - 4) >> 1

    def neighbours(self, b: bytes) -> list:
        q = b[:2]
        cut = 4 + 2 * int.from_bytes(b[2:4], "big")
        left, right = b[4:cut], b[cut:]
        rules = self._free.get(q, [])
        if left:
            rules = rules + self._by_left.get(q + left[-2:], [])
        if right:
            rules = rules + self._by_right.get(q + right[:2], [])
        out = []
        for pl, pr, nl, nr, al, ar, ns in rules:
            if al:
                if left != pl:
                    continue
            elif pl and not left.endswith(pl):
                continue
            if ar:
                if right != pr:
                    continue
            elif pr and not right.startswith(pr):
                continue
            L = left[:len(left) - len(pl)] + nl
            out.append(ns + _u16(len(L) >> 1) + L + nr + right[len(pr):])
        return out
