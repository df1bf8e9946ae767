import numpy as np
import psdsketch as ps
from psdsketch.exact import frob_sq
from psdsketch.lowrank import rank_k_truncate
from psdsketch.core import HardInstanceSpec, gen_hard_instance, hard_instance_best_rank_k_tail

cfg = ps.AlgoConfig()
n, k, eps = 1024, 4, 0.5
fails = {"s1":0, "s2":0, "zspan":0, "s3":0, "wstage":0, "nstage":0, "ok":0}
for rep_i in range(25):
    spec = HardInstanceSpec(n, k, eps, "gamma_b", 1000+rep_i)
    m, blocks = gen_hard_instance(spec)
    A = m.values
    opt = hard_instance_best_rank_k_tail(spec, blocks)
    planted = [b.planted for b in blocks if b.planted is not None]
    o = m.oracle()
    f, rp = ps.algorithm1_frobenius(o, k, eps, cfg, seed=2000+rep_i, keep_internals=True)
    I = rp.internals
    s1, s2, z, q, s3 = I['s1'], I['s2'], I['z'], I['q'], I['s3']
    err = frob_sq(A - f.apply()) / opt
    if err <= 1.5:
        fails["ok"] += 1
        continue
    c1 = [len(np.intersect1d(s1.indices, p)) for p in planted]
    c2 = [len(np.intersect1d(s2.indices, p)) for p in planted]
    AS1 = A[:, s1.indices] * s1.weights[None, :]
    zspan = frob_sq(AS1 - rank_k_truncate((AS1 @ z) @ z.T, k)) / opt
    qAS1 = frob_sq(AS1 - q @ (q.T @ AS1)) / opt
    qA = frob_sq(A - q @ (q.T @ A)) / opt
    cols13 = s1.indices[s3.indices]
    c3 = [len(np.intersect1d(cols13, p)) for p in planted]
    why = "s1" if min(c1) == 0 else ("s2" if min(c2) == 0 else ("zspan" if zspan > 1.4 else ("s3" if min(c3) == 0 else ("wstage" if qAS1 > 1.4 else "nstage"))))
    fails[why] += 1
    print(f"rep {rep_i}: b={len(planted)} s1={c1} s2={c2} s3={c3} zspan {zspan:.2f} qAS1 {qAS1:.2f} qA {qA:.2f} final {err:.2f} -> {why}")
print(fails)
