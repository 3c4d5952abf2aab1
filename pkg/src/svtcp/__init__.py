"""Set-valued tensor complementarity problems: algebra, solvers, class checkers and probes."""
from .classes import (
    ClassVerdict,
    Status,
    check_p_tensor,
    check_r0,
    check_s_tensor,
    check_semipositive,
    probe_sol_boundedness,
)
from .setvalued import (
    All,
    ConeMatch,
    NonnegOrthant,
    OmegaMap,
    Piece,
    PointMatch,
    SvtcpInstance,
    TensorFamily,
    VectorFamily,
    check_limit_r0,
    check_strongly_semipositive_set,
    check_weakly_semipositive_set,
    check_zero_unique_solution,
    feasibility_ray_search,
    is_svtcp_solution,
    membership_C,
    membership_Cprime,
    omega_of,
    probe_level_boundedness,
    promote_cprime_to_c,
    recurrent_omega_set,
    solve_svtcp,
    svtcp_residual,
)
from .tcp import (
    SolveReport,
    SolverConfig,
    TcpInstance,
    is_feasible,
    is_solution,
    natural_residual,
    solve_diagonal,
    solve_lcp_enum,
    solve_tcp,
)
from .tensor import (
    DenseTensor,
    contract_to_scalar,
    contract_to_vector,
    make_diagonal,
    row_subtensor,
    shao_product,
    unit_tensor,
)

__version__ = "0.1.0"
