"""Shared test machinery: seeded random generators for formulas, clause
sets and theorem-suite instances, a finite-model evaluator used as an
independent semantic oracle, and a truth-table satisfiability oracle."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from foltab.syntax import (
    And,
    App,
    BOTTOM,
    Bottom,
    Clause,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    Signature,
    TOP,
    Term,
    Top,
    Var,
    mk_and,
    mk_or,
)

# ---------------------------------------------------------------------------
# Finite models


@dataclass(frozen=True)
class Model:
    domain: tuple[int, ...]
    funcs: dict  # (name, arity) -> dict[args tuple -> element]
    preds: dict  # (name, arity) -> frozenset[args tuple]


def eval_term(t: Term, model: Model, env: dict[str, int]) -> int:
    if isinstance(t, Var):
        return env[t.name]
    args = tuple(eval_term(a, model, env) for a in t.args)
    return model.funcs[(t.functor, len(t.args))][args]


def eval_formula(f: Formula, model: Model, env: dict[str, int]) -> bool:
    if isinstance(f, Literal):
        args = tuple(eval_term(a, model, env) for a in f.args)
        if f.predicate == "=":
            holds = args[0] == args[1]
        else:
            holds = args in model.preds[(f.predicate, len(f.args))]
        return holds if f.positive else not holds
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, And):
        return all(eval_formula(p, model, env) for p in f.parts)
    if isinstance(f, Or):
        return any(eval_formula(p, model, env) for p in f.parts)
    if isinstance(f, Not):
        return not eval_formula(f.body, model, env)
    if isinstance(f, Implies):
        return (not eval_formula(f.lhs, model, env)) or eval_formula(f.rhs, model, env)
    if isinstance(f, Iff):
        return eval_formula(f.lhs, model, env) == eval_formula(f.rhs, model, env)
    if isinstance(f, ForAll):
        return all(eval_formula(f.body, model, {**env, f.var: d}) for d in model.domain)
    if isinstance(f, Exists):
        return any(eval_formula(f.body, model, {**env, f.var: d}) for d in model.domain)
    raise TypeError(f"not a formula: {f!r}")


def random_model(rng: random.Random, sig: Signature, size: int = 2) -> Model:
    domain = tuple(range(size))
    funcs = {}
    for name, arity in sig.functions.items():
        table = {}
        for args in itertools.product(domain, repeat=arity):
            table[args] = rng.randrange(size)
        funcs[(name, arity)] = table
    preds = {}
    for name, arity in sig.predicates.items():
        ext = set()
        for args in itertools.product(domain, repeat=arity):
            if rng.random() < 0.5:
                ext.add(args)
        preds[(name, arity)] = frozenset(ext)
    return Model(domain, funcs, preds)


def all_models(sig: Signature, size: int = 2):
    """Every model over a domain of the given size; tiny signatures only."""
    domain = tuple(range(size))
    f_items = sorted(sig.functions.items())
    p_items = sorted((n, a) for n, a in sig.predicates.items() if n != "=")
    f_spaces = []
    for name, arity in f_items:
        keys = list(itertools.product(domain, repeat=arity))
        f_spaces.append([(name, arity, keys, values) for values in itertools.product(domain, repeat=len(keys))])
    p_spaces = []
    for name, arity in p_items:
        keys = list(itertools.product(domain, repeat=arity))
        subsets = []
        for bits in itertools.product((False, True), repeat=len(keys)):
            subsets.append(frozenset(k for k, b in zip(keys, bits) if b))
        p_spaces.append([(name, arity, ext) for ext in subsets])
    for f_choice in itertools.product(*f_spaces) if f_spaces else [()]:
        funcs = {}
        for name, arity, keys, values in f_choice:
            funcs[(name, arity)] = dict(zip(keys, values))
        for p_choice in itertools.product(*p_spaces) if p_spaces else [()]:
            preds = {}
            for name, arity, ext in p_choice:
                preds[(name, arity)] = ext
            yield Model(domain, funcs, preds)


def formulas_equivalent(f: Formula, g: Formula, rng: random.Random, samples: int = 30) -> bool:
    """Semantic equivalence sampled over random two-element models."""
    sig = Signature.of([f, g])
    from foltab.syntax import free_vars

    fv = sorted(free_vars(f) | free_vars(g))
    for _ in range(samples):
        model = random_model(rng, sig, 2)
        env = {v: rng.randrange(2) for v in fv}
        if eval_formula(f, model, env) != eval_formula(g, model, env):
            return False
    return True


# ---------------------------------------------------------------------------
# Random formulas

_PRED_POOL = (("p", 1), ("q", 1), ("r", 2), ("s", 0))
_FUNC_POOL = (("a", 0), ("b", 0), ("f", 1))
_VAR_POOL = ("X", "Y", "Z")


def random_term(rng: random.Random, vars_allowed: tuple[str, ...], depth: int = 1) -> Term:
    roll = rng.random()
    if vars_allowed and roll < 0.4:
        return Var(rng.choice(vars_allowed))
    name, arity = rng.choice(_FUNC_POOL)
    if arity == 0 or depth <= 0:
        name0 = rng.choice([n for n, a in _FUNC_POOL if a == 0])
        return App(name0)
    return App(name, tuple(random_term(rng, vars_allowed, depth - 1) for _ in range(arity)))


def random_literal(rng: random.Random, vars_allowed: tuple[str, ...]) -> Literal:
    name, arity = rng.choice(_PRED_POOL)
    args = tuple(random_term(rng, vars_allowed) for _ in range(arity))
    return Literal(rng.random() < 0.5, name, args)


def random_formula(
    rng: random.Random,
    depth: int = 4,
    vars_allowed: tuple[str, ...] = _VAR_POOL,
    allow_quantifiers: bool = True,
    allow_consts: bool = True,
) -> Formula:
    if depth <= 0:
        if allow_consts and rng.random() < 0.1:
            return TOP if rng.random() < 0.5 else BOTTOM
        return random_literal(rng, vars_allowed)
    roll = rng.random()
    if roll < 0.25:
        n = rng.randint(2, 3)
        return And(tuple(random_formula(rng, depth - 1, vars_allowed, allow_quantifiers, allow_consts) for _ in range(n)))
    if roll < 0.5:
        n = rng.randint(2, 3)
        return Or(tuple(random_formula(rng, depth - 1, vars_allowed, allow_quantifiers, allow_consts) for _ in range(n)))
    if roll < 0.62:
        return Not(random_formula(rng, depth - 1, vars_allowed, allow_quantifiers, allow_consts))
    if roll < 0.7:
        return Implies(
            random_formula(rng, depth - 1, vars_allowed, allow_quantifiers, allow_consts),
            random_formula(rng, depth - 1, vars_allowed, allow_quantifiers, allow_consts),
        )
    if roll < 0.74:
        return Iff(
            random_formula(rng, depth - 2, vars_allowed, allow_quantifiers, allow_consts),
            random_formula(rng, depth - 2, vars_allowed, allow_quantifiers, allow_consts),
        )
    if allow_quantifiers and roll < 0.9:
        v = rng.choice(_VAR_POOL)
        ctor = ForAll if rng.random() < 0.5 else Exists
        return ctor(v, random_formula(rng, depth - 1, vars_allowed, allow_quantifiers, allow_consts))
    return random_literal(rng, vars_allowed)


def random_nnf(rng: random.Random, depth: int = 3, ground: bool = False) -> Formula:
    vars_allowed = () if ground else _VAR_POOL
    if depth <= 0:
        if rng.random() < 0.08:
            return TOP if rng.random() < 0.5 else BOTTOM
        return random_literal(rng, vars_allowed)
    roll = rng.random()
    if roll < 0.45:
        n = rng.randint(2, 3)
        return And(tuple(random_nnf(rng, depth - 1, ground) for _ in range(n)))
    if roll < 0.9:
        n = rng.randint(2, 3)
        return Or(tuple(random_nnf(rng, depth - 1, ground) for _ in range(n)))
    return random_literal(rng, vars_allowed)


def random_prenex_nnf(rng: random.Random, depth: int = 3) -> Formula:
    body = random_nnf(rng, depth)
    for _ in range(rng.randint(0, 3)):
        v = rng.choice(_VAR_POOL)
        ctor = ForAll if rng.random() < 0.5 else Exists
        body = ctor(v, body)
    return body


def random_sentence(rng: random.Random, depth: int = 3) -> Formula:
    """Closed formula, biased toward prenex shapes."""
    if rng.random() < 0.6:
        f = random_prenex_nnf(rng, depth)
    else:
        f = random_formula(rng, depth)
    from foltab.syntax import free_vars

    out = f
    for v in sorted(free_vars(f)):
        out = ForAll(v, out) if rng.random() < 0.5 else Exists(v, out)
    return out


# ---------------------------------------------------------------------------
# Ground clause sets and the truth-table oracle


def random_ground_clauses(
    rng: random.Random, max_atoms: int = 6, max_clauses: int = 8
) -> list[Clause]:
    n_atoms = rng.randint(1, max_atoms)
    atoms = [f"a{i}" for i in range(1, n_atoms + 1)]
    n_clauses = rng.randint(1, max_clauses)
    out = []
    for _ in range(n_clauses):
        width = rng.randint(1, 3)
        lits = []
        for _ in range(width):
            a = rng.choice(atoms)
            lits.append(Literal(rng.random() < 0.5, a))
        c = Clause(tuple(dict.fromkeys(lits)))
        if c not in out:
            out.append(c)
    return out


def tt_satisfiable(clauses: list[Clause]) -> bool:
    atoms = sorted({l.predicate for c in clauses for l in c.literals})
    for bits in itertools.product((False, True), repeat=len(atoms)):
        val = dict(zip(atoms, bits))
        if all(
            any(val[l.predicate] == l.positive for l in c.literals) for c in clauses
        ):
            return True
    return False


# ---------------------------------------------------------------------------
# Theorem-suite instance generators.  All instances keep F |= G structural:
# G is a weakening of F (a subset of conjuncts, a disjunctive widening, or
# an instance of a universal conjunct).


def _atom(name: str, *args: Term) -> Literal:
    return Literal(True, name, tuple(args))


def _rule(body: list[Literal], head: Literal, vars_used: list[str]) -> Formula:
    cl = mk_or([l.complement() for l in body] + [head])
    for v in sorted(set(vars_used)):
        cl = ForAll(v, cl)
    return cl


def gen_urr_instance(rng: random.Random, horn_only: bool = False):
    """(F, G) with F a U-range-restricted (and Horn) conjunction of ground
    facts and guarded rules, and G entailed by F by construction."""
    preds = [(f"p{i}", rng.choice((1, 1, 2))) for i in range(1, rng.randint(2, 4) + 1)]
    consts = [App("a"), App("b")]
    conjuncts: list[Formula] = []
    # facts
    for _ in range(rng.randint(1, 2)):
        name, arity = rng.choice(preds)
        conjuncts.append(_atom(name, *rng.sample(consts, k=arity) if arity <= 2 else ()))
    # guarded rules: head variables all occur in the negative body
    for _ in range(rng.randint(1, 2)):
        bname, barity = rng.choice(preds)
        hname, harity = rng.choice(preds)
        bvars = [f"X{i}" for i in range(1, barity + 1)]
        body = [_atom(bname, *[Var(v) for v in bvars])]
        if rng.random() < 0.4 and not horn_only:
            b2name, b2arity = rng.choice(preds)
            body.append(_atom(b2name, *[Var(v) for v in (bvars * 2)[:b2arity]]))
        if rng.random() < 0.4 and horn_only:
            b2name, b2arity = rng.choice(preds)
            body.append(_atom(b2name, *[Var(v) for v in (bvars * 2)[:b2arity]]))
        head_args = [Var(rng.choice(bvars)) if rng.random() < 0.8 else rng.choice(consts) for _ in range(harity)]
        conjuncts.append(_rule(body, _atom(hname, *head_args), bvars))
    # occasionally a purely existential conjunct (not usable for weakening
    # variants that instantiate)
    if not horn_only and rng.random() < 0.25:
        name, arity = rng.choice(preds)
        body = _atom(name, *[Var("Y")] * arity)
        conjuncts.append(Exists("Y", body) if arity else body)
    f = mk_and(conjuncts)
    # weakening
    k = rng.randint(1, min(2, len(conjuncts)))
    picked = rng.sample(conjuncts, k=k)
    mode = rng.random()
    if mode < 0.6 or len(conjuncts) == 1:
        g = mk_and(picked)
    else:
        g = mk_or(picked)
    return f, g


def gen_horn_instance(rng: random.Random):
    return gen_urr_instance(rng, horn_only=True)


def gen_sentence_pair(rng: random.Random):
    """(F, G) sentences with F and ~G both U-range-restricted."""
    f, g = gen_urr_instance(rng)
    return f, g


def gen_vx_instance(rng: random.Random):
    """(K, Q, targets) for definability: K is a biconditional chain, Q a
    query atom over the chain, targets a predicate from the chain."""
    length = rng.randint(2, 3)
    names = [f"e{i}" for i in range(1, length + 1)]
    arity = rng.choice((1, 1, 2))
    xs = [f"X{i}" for i in range(1, arity + 1)]
    conj: list[Formula] = []
    for left, right in zip(names, names[1:]):
        largs = [Var(v) for v in xs]
        conj.append(_rule([_atom(left, *largs)], _atom(right, *largs), xs))
        conj.append(_rule([_atom(right, *largs)], _atom(left, *largs), xs))
    # a ground fact keeps the knowledge base interesting but harmless
    if rng.random() < 0.5:
        conj.append(_atom(names[0], *[App("a")] * arity))
    kb = mk_and(conj)
    query = _atom(names[0], *[Var(v) for v in xs])
    target = rng.choice(names[1:])
    return kb, query, frozenset([target])
