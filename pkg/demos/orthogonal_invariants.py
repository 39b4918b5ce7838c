"""Brauer diagrams as O(d) invariants: evaluate, count, and find the kernel."""

from brauerkit.diagram import cap, compose, cup, format_diagram
from brauerkit.expr import elaborate, parse
from brauerkit.linear import antisymmetrizer
from brauerkit.tensor import EvalFunctor, fft_check, sft_check

F = EvalFunctor.make("symmetric", 2)

# a closed loop evaluates to d
loop = compose(cup(), cap())
print(format_diagram(loop), "->", F.evaluate(loop).to_rows()[0][0])

# the snake collapses to the identity
snake = elaborate(parse("(cap ++ id(1)) * (id(1) ++ cup)"))
print("snake:", format_diagram(snake))

# the functor is onto the invariants, injective while m + n <= 2d
for m, n in [(1, 1), (2, 2), (3, 3)]:
    r = fft_check(F, m, n)
    print(f"Br({m},{n}): {r['basis_size']} diagrams, rank {r['rank']}, oracle {r['oracle']}")

# past that, the kernel is generated by the antisymmetrizer on d + 1 strands
r = sft_check(F, 3, 3)
print("kernel dim at (3,3):", r["kernel_dim"], "ideal dim:", r["ideal_dim"])
print("e(3) evaluates to zero:", F.evaluate_lin(antisymmetrizer(3)).nnz() == 0)
