"""The same cusp cone y^2 z - x^3 perturbed by z^(3+k) for growing k.

k = 1 is a superisolated singularity; larger k gives Yomdin-Le surfaces
whose lifted divisor weights and multiplicities change with k.
"""
from qres.cli import JobConfig, run

for k in range(1, 7):
    doc = run(JobConfig("surface", poly=f"y^2*z-x^3+z^{3 + k}", verify=True))
    sres = doc["_resolution"]
    [d] = sres.divisors
    print(f"k={k}: E1 weights {d.weights} multiplicity {d.multiplicity}, "
          f"mu={sres.milnor()}, Delta={doc['delta']['cyclotomic']}, "
          f"checks ok: {doc['verification']['ok']}")
