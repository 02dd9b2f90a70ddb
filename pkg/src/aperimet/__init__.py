"""Model sets with polyomino windows in the octagonal cut-and-project scheme:
covariograms, autocorrelation, diffraction and homometric window pairs."""

__version__ = "0.1.0"

from .autocorr import (EmpiricalAutocorrelation, central_eta_ranking, empirical_autocorrelation, eta,
                       homometric, leading_differences)
from .cutproject import (ModelSetPatch, density_estimate, generate_patch, genericity_check,
                         patch_difference)
from .diffraction import BraggPeak, PeakList, closed_form_f, intensity, peak_list, verify_closed_form
from .errors import (AperimetError, BoundaryHit, BudgetExceeded, DuplicateCell, EmptyWindow,
                     NoPlacementMatches, OverlappingSum, ParseError, ReconstructionFailed)
from .formats import format_window, parse_window, parse_window_text, write_window
from .quadring import (OCTAGONAL, LatticeVector, QuadHalf, QuadInt, direct_image, solve_coefficients,
                       star_image, star_on_half_module)
from .search import (HomometricPairReport, PointConfiguration, minkowski_polyomino,
                     reconstruct_paper_pair, search_1d_pairs, search_polyomino_pairs)
from .window import (DiscreteAutocorrelation, Polyomino, covariogram_equal, covariogram_eval,
                     covariogram_grid, difference_body, discrete_autocorrelation,
                     window_fourier_transform)
