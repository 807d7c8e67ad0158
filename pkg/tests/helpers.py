"""Builders shared by the test files."""
import numpy as np

from core.model import ComponentParams, ConstraintCode, CWFAParams, Dataset
from skills.simulate.sampler import GroupGenerator, SimSpec


def separated_spec(seed=0, sizes=(90, 80)):
    """Two well-separated groups, p=3, one factor each."""
    groups = (
        GroupGenerator(
            mean=(0.0, 0.0, 0.0),
            intercept=1.0,
            slope=(0.5, -0.3, 0.2),
            noise_var=0.25,
            loadings=((1.0,), (0.8,), (0.6,)),
            uniquenesses=(0.3, 0.4, 0.5),
        ),
        GroupGenerator(
            mean=(8.0, 7.0, -6.0),
            intercept=-2.0,
            slope=(-0.4, 0.6, 0.1),
            noise_var=0.5,
            loadings=((0.5,), (-0.9,), (0.7,)),
            uniquenesses=(0.5, 0.3, 0.4),
        ),
    )
    return SimSpec(groups=groups, group_sizes=sizes, seed=seed, name="separated")


def random_params(code, G, p, q, seed=0):
    """Random parameters satisfying every constraint of `code`."""
    if isinstance(code, str):
        code = ConstraintCode.parse(code)
    rng = np.random.default_rng(seed)

    def draw_psi():
        if code.psi_isotropic:
            return np.full(p, rng.uniform(0.5, 1.5))
        return rng.uniform(0.5, 1.5, size=p)

    shared_l = rng.normal(size=(p, q))
    shared_psi = draw_psi()
    shared_sigma = float(rng.uniform(0.5, 2.0))
    weights = rng.dirichlet(np.full(G, 5.0))
    weights[-1] = 1.0 - weights[:-1].sum()
    components = []
    for g in range(G):
        components.append(
            ComponentParams(
                weight=weights[g],
                intercept=rng.normal(),
                slope=rng.normal(size=p),
                noise_var=shared_sigma if code.sigma_equal else float(rng.uniform(0.5, 2.0)),
                mean=rng.normal(scale=3.0, size=p),
                loadings=shared_l if code.lambda_equal else rng.normal(size=(p, q)),
                uniquenesses=shared_psi if code.psi_equal else draw_psi(),
            )
        )
    return CWFAParams(code=code, components=tuple(components), p=p, q=q)


def random_dataset(n, p, seed=0, labels=None):
    rng = np.random.default_rng(seed)
    return Dataset(x=rng.normal(size=(n, p)), y=rng.normal(size=n), labels=labels)


def random_groups_spec(seed=0, G=3, p=5, q=2, size=100):
    """`G` random factor-analytic groups of `size` rows in `p` covariates."""
    rng = np.random.default_rng(seed)
    groups = tuple(
        GroupGenerator(
            mean=rng.normal(scale=4.0, size=p),
            intercept=rng.normal(scale=2.0),
            slope=rng.normal(size=p),
            noise_var=rng.uniform(0.2, 1.0),
            loadings=rng.normal(size=(p, q)),
            uniquenesses=rng.uniform(0.2, 1.0, size=p),
        )
        for _ in range(G)
    )
    return SimSpec(groups=groups, group_sizes=(size,) * G, seed=seed, name="random-groups")
