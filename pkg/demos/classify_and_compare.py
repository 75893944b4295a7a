"""Walk through the symbolic side: normal forms, verdicts and class counts."""
from mixed_brieskorn.classifier import (
    bilipschitz_equivalent,
    enumerate_lipschitz_classes,
    topological_normal_form,
    topologically_equivalent,
)
from mixed_brieskorn.mixed_core import ExponentData, build_family, multiplicity
from mixed_brieskorn.surface_geometry import surface_profile


def show(a, b):
    E = ExponentData(a, b)
    f = build_family(E)
    print(f"f = {f}")
    print(f"  multiplicity {multiplicity(f)}, normal form {topological_normal_form(E)}")
    if E.n == 2:
        p = surface_profile(E)
        print(f"  type {p.type}, cone {p.cone.kind}, beta {p.beta}, "
              f"{p.components} link component(s), normally embedded: {p.normally_embedded}")


for a, b in [((2, 3), (0, 0)), ((2, 3), (1, 0)), ((0, 3), (1, 1)), ((2, 2), (1, 1))]:
    show(a, b)

print()
E1, E2 = ExponentData((2, 2), (1, 3)), ExponentData((2, 2), (3, 1))
print("bilip", bilipschitz_equivalent(E1, E2))
print("top  ", topologically_equivalent(ExponentData((1, 2), (0, 0)), ExponentData((2, 2), (0, 0))))

classes = enumerate_lipschitz_classes((2, 2), 2)
print(f"\na = (2, 2), b <= 2: {classes.count} bi-Lipschitz classes")
for members in classes.classes:
    print("  ", members)
