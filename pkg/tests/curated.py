"""Curated small sequents with known status in minimal/intuitionistic logic.

Every entry is re-verified by the tests before use: theorems must come out
of bounded saturation, non-theorems must have a standard Kripke
countermodel (with bot false everywhere for the intuitionistic list).
"""

from primal_deduct.syntax import parse_sequent

ML_THEOREMS = [
    parse_sequent(text)
    for text in (
        "|- x -> x",
        "|- x -> (y -> x)",
        "|- x & y -> x",
        "|- x & y -> y",
        "|- x & y -> y & x",
        "|- x -> x & x",
        "|- (x -> y) & x -> y",
        "|- x & (x -> y) -> y",
        "|- x -> (y -> x & y)",
        "|- (x -> y) -> (x -> y)",
        "x -> y |- x & z -> y",
        "x -> y, y -> z |- x -> z",
        "x |- (x -> y) -> y",
        "y |- x -> y",
        "x -> (y -> z) |- x & y -> z",
        "x & y -> z |- x -> (y -> z)",
        "|- x & y & z -> z",
        "|- top",
        "|- x -> top",
        "x -> y |- x -> y & y",
        "|- (x -> y) -> (x & z -> y)",
        "|- x & (y & z) -> z & x",
    )
]

ML_NON_THEOREMS = [
    parse_sequent(text)
    for text in (
        "|- x",
        "|- bot",
        "x -> y |- y",
        "x -> y |- x",
        "bot |- x",
        "x |- x & y",
        "x & y |- bot",
        "|- (x -> y) -> y",
        "x -> y, y |- x",
        "|- ((x -> y) -> x) -> x",
        "|- (x -> y) -> (y -> x)",
        "y -> x |- x -> y",
        "top |- bot",
        "x -> (y -> z) |- y",
        "top -> x |- y",
        "|- x -> (x -> y)",
        "x & x -> y |- y",
        "|- (x & y -> z) -> (x -> z)",
        "x -> z, y |- z",
        "|- top -> bot",
        "x -> bot |- y -> bot",
        "|- x -> x & y",
    )
]

IL_THEOREMS = [
    parse_sequent(text)
    for text in (
        "bot |- x",
        "bot |- x & y",
        "|- bot -> x",
        "x, x -> bot |- y",
        "x & bot |- y",
        "bot & x |- y & y",
        "|- x & bot -> y",
        "bot |- x -> y",
        "x & (x -> bot) |- y",
        "|- bot -> (x -> y)",
        "bot, y |- x & y",
        "x -> bot, x |- y & x",
        "|- x -> x",
        "|- bot -> bot",
        "x -> bot |- x -> y",
        "bot -> bot |- top",
        "|- (x -> bot) -> (x -> y)",
        "|- x & (x -> bot) -> y",
        "x |- (x -> bot) -> y",
        "bot |- bot",
        "|- x -> (x -> bot) -> y",
        "x -> bot, y -> x |- y -> z",
    )
]

IL_NON_THEOREMS = [
    parse_sequent(text)
    for text in (
        "|- x",
        "|- bot",
        "x |- y",
        "x -> y |- y",
        "x |- x & y",
        "|- x -> y",
        "bot -> x |- x",
        "x & y |- bot",
        "|- (x -> y) -> x",
        "y |- x & y",
        "top |- bot",
        "x -> (y -> x) |- y",
        "|- (x -> bot) -> bot",
        "x -> bot |- x",
        "|- ((x -> bot) -> bot) -> x",
        "y -> bot |- x -> bot",
        "x |- x -> bot",
        "top -> x |- bot",
        "|- x & top",
        "x -> y |- y -> x",
        "|- (x -> x) -> y",
        "x & x -> y |- y",
    )
]
