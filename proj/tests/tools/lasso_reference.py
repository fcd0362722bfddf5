# Copyright 2026 The bisf Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the frozen Lasso objective values used by the C++ tests.

The instance is closed-form so both sides build it without sharing an RNG.
Run: python3 lasso_reference.py   (needs numpy and cvxpy)
"""

import cvxpy as cp
import numpy as np

M, P, SIGMA2 = 10, 20, 0.5

m = np.arange(M)[:, None]
p = np.arange(P)[None, :]
phi = np.exp(1j * (3.0 * np.sin(1.3 * m + 0.7 * p * p) + 0.5 * m * p)) / np.sqrt(M)
mm = np.arange(M)
y = np.cos(0.9 * mm) + 1j * np.sin(0.4 * mm * mm)
top = np.max(np.abs(phi.conj().T @ y)) / SIGMA2

for ratio in (0.3, 0.05):
    lam = ratio * top
    a = cp.Variable(P, complex=True)
    objective = 0.5 / SIGMA2 * cp.sum_squares(y - phi @ a) + lam * cp.norm1(a)
    problem = cp.Problem(cp.Minimize(objective))
    problem.solve(solver="SCS", eps=1e-12, max_iters=200000)
    print(f"ratio {ratio}: lambda_max {top!r} objective {problem.value!r}")
