"""Regenerates math_pairs.json: LaTeX answer pairs with equivalence decided by sympy.

Each entry lists the LaTeX forms together with a sympy-readable transcription;
the verdict is whether simplify(a - b) == 0.
"""
import json
import pathlib

import sympy as sp

PAIRS = [
    # LaTeX a, LaTeX b, sympy a, sympy b
    (r"\frac{1}{2}", "0.5", "Rational(1,2)", "Rational(5,10)"),
    (r"\frac{3}{4}", r"\dfrac{6}{8}", "Rational(3,4)", "Rational(6,8)"),
    (r"2x+1", r"1+2x", "2*x+1", "1+2*x"),
    (r"x^2-1", r"(x-1)(x+1)", "x**2-1", "(x-1)*(x+1)"),
    (r"\sqrt{8}", r"2\sqrt{2}", "sqrt(8)", "2*sqrt(2)"),
    (r"9\pi", r"\pi \cdot 9", "9*pi", "pi*9"),
    (r"\frac{\pi}{2}", r"0.5\pi", "pi/2", "Rational(1,2)*pi"),
    (r"2^{10}", "1024", "2**10", "1024"),
    (r"\frac{x}{2}", r"0.5x", "x/2", "Rational(1,2)*x"),
    (r"3(x-2)", r"3x-6", "3*(x-2)", "3*x-6"),
    (r"\sqrt[3]{27}", "3", "27**Rational(1,3)", "3"),
    (r"(a+b)^2", r"a^2+2ab+b^2", "(a+b)**2", "a**2+2*a*b+b**2"),
    (r"\frac{5}{6}", r"\frac{10}{12}", "Rational(5,6)", "Rational(10,12)"),
    (r"1.25", r"\frac{5}{4}", "Rational(125,100)", "Rational(5,4)"),
    (r"\frac{a}{b}\cdot b", "a", "a/b*b", "a"),
    (r"x \times y", r"yx", "x*y", "y*x"),
    (r"\frac{1}{\sqrt{2}}", r"\frac{\sqrt{2}}{2}", "1/sqrt(2)", "sqrt(2)/2"),
    (r"-(-4)", "4", "-(-4)", "4"),
    (r"12 \div 4", "3", "12/4", "3"),
    (r"\left(x+1\right)^2", r"x^2+2x+1", "(x+1)**2", "x**2+2*x+1"),
    (r"\boxed{42}", "42", "42", "42"),
    (r"\text{55}", "55", "55", "55"),
    (r"180^\circ", "180", "180", "180"),
    (r"5\text{ cm}", "5", "5", "5"),
    (r"\tfrac{2}{3}", r"\frac{4}{6}", "Rational(2,3)", "Rational(4,6)"),
    (r"2\pi r", r"2r\pi", "2*pi*r", "2*r*pi"),
    (r"\frac{x^2-4}{x-2}", r"x+2", "(x**2-4)/(x-2)", "x+2"),
    (r"\alpha+\beta", r"\beta+\alpha", "alpha+beta", "beta+alpha"),
    (r"0.75", r"\frac{3}{4}", "Rational(75,100)", "Rational(3,4)"),
    (r"4^{1/2}", "2", "4**Rational(1,2)", "2"),
    # Not equivalent.
    (r"\frac{1}{2}", r"\frac{1}{3}", "Rational(1,2)", "Rational(1,3)"),
    (r"2x+1", r"2x-1", "2*x+1", "2*x-1"),
    (r"x^2", r"2x", "x**2", "2*x"),
    (r"\sqrt{8}", r"3\sqrt{2}", "sqrt(8)", "3*sqrt(2)"),
    (r"9\pi", "9", "9*pi", "9"),
    (r"1024", r"2^{11}", "1024", "2**11"),
    (r"\frac{3}{4}", "0.7", "Rational(3,4)", "Rational(7,10)"),
    (r"(a+b)^2", r"a^2+b^2", "(a+b)**2", "a**2+b**2"),
    (r"x-y", r"y-x", "x-y", "y-x"),
    (r"\frac{x}{y}", r"\frac{y}{x}", "x/y", "y/x"),
    (r"3x-6", r"3(x-6)", "3*x-6", "3*(x-6)"),
    (r"\sqrt[3]{27}", "9", "27**Rational(1,3)", "9"),
    (r"12", "13", "12", "13"),
    (r"-4", "4", "-4", "4"),
    (r"\frac{5}{6}", r"\frac{6}{5}", "Rational(5,6)", "Rational(6,5)"),
    (r"2\pi", r"\pi", "2*pi", "pi"),
    (r"x^3", r"x^2", "x**3", "x**2"),
    (r"\frac{1}{\sqrt{2}}", r"\sqrt{2}", "1/sqrt(2)", "sqrt(2)"),
    (r"0.333", r"\frac{1}{3}", "Rational(333,1000)", "Rational(1,3)"),
    (r"a b", r"a+b", "a*b", "a+b"),
    (r"2^{x}", r"x^{2}", "2**x", "x**2"),
    (r"\alpha", r"\beta", "alpha", "beta"),
    (r"x+1", "x", "x+1", "x"),
    (r"\frac{2}{3}", r"\frac{3}{2}", "Rational(2,3)", "Rational(3,2)"),
    (r"1.5", r"\frac{5}{2}", "Rational(15,10)", "Rational(5,2)"),
    (r"(x+1)^2", r"x^2+1", "(x+1)**2", "x**2+1"),
    (r"4\sqrt{3}", r"\sqrt{12}", "4*sqrt(3)", "sqrt(12)"),
    (r"\pi^2", r"2\pi", "pi**2", "2*pi"),
    (r"63", "36", "63", "36"),
    (r"x y z", r"x y", "x*y*z", "x*y"),
]


def main() -> None:
    symbols = {name: sp.Symbol(name) for name in ("x", "y", "z", "a", "b", "r", "alpha", "beta")}
    symbols.update(Rational=sp.Rational, sqrt=sp.sqrt, pi=sp.pi)
    out = []
    for latex_a, latex_b, sym_a, sym_b in PAIRS:
        diff = sp.simplify(sp.sympify(sym_a, locals=symbols) - sp.sympify(sym_b, locals=symbols))
        out.append({"a": latex_a, "b": latex_b, "equivalent": bool(diff == 0)})
    path = pathlib.Path(__file__).with_name("math_pairs.json")
    path.write_text(json.dumps(out, indent=1) + "\n")
    print(f"{sum(p['equivalent'] for p in out)} equivalent / {len(out)} pairs")


if __name__ == "__main__":
    main()
