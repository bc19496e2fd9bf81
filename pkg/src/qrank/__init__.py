"""Exact q-series machinery for rank and crank moment identities."""
from .exact import Cyc, Rat, cyc_to_rat, kronecker, root_of_unity, zeta_pow
from .qseries import PSeries, EtaSpec, eta_expand, jprod, jtriple, mocktheta_g, pochhammer, qpow
from .partitions import (StatTables, d_closed_form, d_series, mw_diff_series, nt_diff_series, pn,
                         stat_tables)
from .appell import AppellPoint, MatSL2, Fps_series, Fps_crank_series, Lp_series, h1_at_cusp, ord_dAhat, ord_glx
from .modular import CuspClass, chi_eta, chi_geta, cusp_set, eta_div_ledger, Upk, Upk_prime, valence_bound
from .theorems import (IdentityRecord, Mp_series, Np_series, case_select, load_identities, modularize,
                       t_poly_fit, t_series, verify_record)

__version__ = "0.1.0"
