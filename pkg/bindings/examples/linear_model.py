"""Three nonnegative variables and one linear row, rendered as LP text."""

import pyoptmap as pom

model = pom.BoundModel(pom.LpWriterBackend())

x = model.add_variable(lb=0.0, name="x")
y = model.add_variable(lb=0.0, name="y")
z = model.add_variable(lb=0.0, name="z")
constraint = model.add_linear_constraint(x + 2 * y + 3 * z, pom.Leq, 1.0)

if __name__ == "__main__":
    print(model.backend.render(), end="")
