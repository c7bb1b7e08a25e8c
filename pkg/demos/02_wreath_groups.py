"""Wreath products: lamp configurations twisted by a base group.

The classic picture is a lamplighter walking a street: an element is a
finite set of lit lamps (values in the lamp group, indexed by the base
group) together with the lamplighter's final displacement.
"""
from soficwreath import cyclic, integers, wreath_product

# Lamps valued in Z/2 along an infinite street indexed by the integers.
lamplighter = wreath_product(cyclic(2), integers())
lamps = lamplighter.lamps

toggle = lamplighter.element({0: 1}, 0)   # light the lamp where you stand
step = lamplighter.element({}, 1)         # step right, touch nothing

print("toggle:", lamplighter.encode(toggle))
print("step:  ", lamplighter.encode(step))

# Walking then lighting lights the lamp at the new position: the product
# twists the second factor's lamps by the first factor's displacement.
walk_then_toggle = lamplighter.mul(step, toggle)
print("step * toggle:", lamplighter.encode(walk_then_toggle))

# Compare with toggling first: the lamp ends up at a different index.
toggle_then_walk = lamplighter.mul(toggle, step)
print("toggle * step:", lamplighter.encode(toggle_then_walk))

# The twist is the index-shift action on finitely supported configurations.
config = lamps.make({0: 1, 2: 1})
print("configuration {0, 2} shifted by 3:", lamps.shift(3, config).entries)

# Commutators of far-apart toggles vanish; adjacent walk/toggle do not.
far = lamplighter.element({5: 1}, 0)
commutator = lamplighter.mul(
    lamplighter.mul(toggle, far), lamplighter.inv(lamplighter.mul(far, toggle))
)
print("far toggles commute:", commutator == lamplighter.identity())

moved = lamplighter.mul(lamplighter.mul(step, toggle), lamplighter.inv(step))
print("conjugating a toggle by a step moves it:", lamplighter.encode(moved))

# Base projection is a homomorphism; the lamp projection is not.
u, v = walk_then_toggle, toggle_then_walk
assert lamplighter.mul(u, v).right == u.right + v.right
assert lamplighter.mul(step, toggle).left != lamps.mul(step.left, toggle.left)
print("base projection multiplicative, lamp projection not")
