import numpy as np
import psdsketch as ps
from psdsketch.exact import frob_sq, spec_norm_sq, best_rank_k
from psdsketch.lowrank import rank_k_truncate
from psdsketch.core import HardInstanceSpec, gen_hard_instance, hard_instance_best_rank_k_tail

cfg = ps.AlgoConfig()
n, k, eps = 1024, 10, 0.5
m = ps.gen_powerlaw_psd(n, seed=5)
A = m.values
_, tail_f, _ = best_rank_k(m, k)
for seed in (1, 2):
    o = m.oracle()
    f, rep = ps.algorithm1_frobenius(o, k, eps, cfg, seed=seed, keep_internals=True)
    I = rep.internals
    s1, s2, z, q, w, s3 = I['s1'], I['s2'], I['z'], I['q'], I['w'], I['s3']
    AS1 = A[:, s1.indices] * s1.weights[None, :]
    pcp = frob_sq(AS1 - rank_k_truncate(AS1, k)) / tail_f
    spec_z = spec_norm_sq(AS1 - (AS1 @ z) @ z.T) / (eps / k * tail_f)
    AZ = (AS1 @ z) @ z.T
    zspan = frob_sq(AS1 - rank_k_truncate(AZ, k)) / tail_f
    qAS1 = frob_sq(AS1 - q @ (q.T @ AS1)) / tail_f
    qA = frob_sq(A - q @ (q.T @ A)) / tail_f
    err = frob_sq(A - f.apply()) / tail_f
    print(f"seed {seed}: t1={s1.t} t2={s2.t} t3={I['s3'].t} t4={I['s4'].t} t5={I['s5'].t}")
    print(f"  pcp {pcp:.3f} | Zspec(vs eps/k tail) {spec_z:.3f} | zspan {zspan:.3f} | qAS1 {qAS1:.3f} | qA {qA:.3f} | final {err:.3f}")
    # W-stage detail: best achievable with full info in colspan(AS1S3) x rowspan(Z):
    cols13 = s1.indices[s3.indices]
    w13 = s1.weights[s3.indices] * s3.weights
    AS13 = A[:, cols13] * w13[None, :]
    # rank-k within colspan(AS13) + rowspan(Z) vs AS1 (full info)
    P = AS13
    Wfull = rank_k_truncate(np.linalg.pinv(P) @ AS1 @ z, k)
    full_cost = frob_sq(P @ Wfull @ z.T - AS1) / tail_f
    print(f"  W-stage with FULL-info regression would give {full_cost:.3f}")
