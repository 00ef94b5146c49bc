"""Generator relations over N^2 and the faithfulness criterion."""

from prodsys import FreeAbelian, ProductSystem, build_truncation
from prodsys.reps import (
    check_covariance,
    check_faithfulness_criterion,
    check_representation,
    criterion_string,
    fock_assignment,
    gen_cov_relations,
    gen_mult_relations,
)

E = ProductSystem(FreeAbelian(2), (2, 3))
for line in gen_mult_relations(E).to_display() + gen_cov_relations(E).to_display():
    print(line)

a = fock_assignment(build_truncation(E, 2))
rep = check_representation(a)
print(f"{len(rep)} representation checks, all pass: {rep.passed}")
print(check_covariance(a).table())

print("criterion:", criterion_string(E))
M = E.monoid
ok, witness = check_faithfulness_criterion(a, [M.generator(0), M.generator(1)])
print("product nonzero:", ok, "vacuum component:", witness[0])
print("over N with d=2:", criterion_string(ProductSystem.over_N(2)))
