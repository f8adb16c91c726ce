"""Term trees over an operation signature: parsing, evaluation, printing.

A term is an immutable nested tuple:

    ("var", name)             -- a variable
    ("op", name, (args...))   -- an operation symbol applied to subterms

The profile files and the builtin identities spell variables x0, x1, ...,
but any identifier that is not an operation name parses as a variable.
Evaluation is numpy-aware: binding variables to index arrays evaluates the
term over a whole grid of assignments at once.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

__all__ = [
    "TermError",
    "parse_term",
    "term_vars",
    "format_term",
    "eval_term",
    "parse_identity",
    "identity_vars",
]


class TermError(ValueError):
    """Malformed term text, unknown operation symbol or unbound variable."""


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[(),])")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise TermError(f"unexpected character at {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_term(text: str, signature) -> tuple:
    """Parse prefix-application syntax, e.g. ``mul(mul(x0, x1), inv(x0))``.

    Nullary operations may be written bare (``e``) or applied (``e()``).
    """
    tokens = _tokenize(text)
    arities = {name: k for name, k in signature.ops}

    def parse(pos: int) -> tuple[tuple, int]:
        if pos >= len(tokens):
            raise TermError(f"unexpected end of term in {text!r}")
        tok = tokens[pos]
        if tok in "(),":
            raise TermError(f"unexpected {tok!r} in {text!r}")
        if pos + 1 < len(tokens) and tokens[pos + 1] == "(":
            if tok not in arities:
                raise TermError(f"unknown operation symbol {tok!r}")
            args, cur = [], pos + 2
            if cur < len(tokens) and tokens[cur] == ")":
                cur += 1
            else:
                while True:
                    arg, cur = parse(cur)
                    args.append(arg)
                    if cur >= len(tokens):
                        raise TermError(f"missing ')' in {text!r}")
                    if tokens[cur] == ",":
                        cur += 1
                        continue
                    if tokens[cur] == ")":
                        cur += 1
                        break
                    raise TermError(f"expected ',' or ')' in {text!r}")
            if len(args) != arities[tok]:
                raise TermError(
                    f"operation {tok!r} expects {arities[tok]} arguments, "
                    f"got {len(args)}")
            return ("op", tok, tuple(args)), cur
        # bare identifier: nullary op or variable
        if tok in arities:
            if arities[tok] != 0:
                raise TermError(
                    f"operation {tok!r} of arity {arities[tok]} needs "
                    "an argument list")
            return ("op", tok, ()), pos + 1
        return ("var", tok), pos + 1

    term, end = parse(0)
    if end != len(tokens):
        raise TermError(f"trailing tokens {tokens[end:]!r} in {text!r}")
    return term


def term_vars(term: tuple) -> tuple[str, ...]:
    """Variable names of a term, in order of first appearance."""
    seen: list[str] = []

    def walk(t: tuple) -> None:
        if t[0] == "var":
            if t[1] not in seen:
                seen.append(t[1])
        else:
            for a in t[2]:
                walk(a)

    walk(term)
    return tuple(seen)


def format_term(term: tuple) -> str:
    if term[0] == "var":
        return term[1]
    name, args = term[1], term[2]
    if not args:
        return name
    return f"{name}({', '.join(format_term(a) for a in args)})"


def eval_term(algebra, term: tuple, env: Mapping[str, object]):
    """Value of ``term`` in ``algebra`` under ``env``.

    ``env`` maps variable names to element indices; numpy arrays broadcast,
    so a grid of assignments evaluates in one call.
    """
    kind = term[0]
    if kind == "var":
        name = term[1]
        if name not in env:
            raise TermError(f"unbound variable {name!r}")
        return env[name]
    name, args = term[1], term[2]
    if name not in algebra.tables:
        raise TermError(f"unknown operation symbol {name!r}")
    table = algebra.tables[name]
    if not args:
        return table[()]
    vals = tuple(eval_term(algebra, a, env) for a in args)
    return table[vals]


def parse_identity(text: str, signature) -> tuple[tuple, tuple]:
    """Parse ``lhs = rhs`` into a pair of terms."""
    if text.count("=") != 1:
        raise TermError(f"identity needs exactly one '=': {text!r}")
    lhs, rhs = text.split("=")
    return parse_term(lhs, signature), parse_term(rhs, signature)


def identity_vars(identity: Iterable[tuple]) -> tuple[str, ...]:
    lhs, rhs = identity
    seen = list(term_vars(lhs))
    for v in term_vars(rhs):
        if v not in seen:
            seen.append(v)
    return tuple(seen)
