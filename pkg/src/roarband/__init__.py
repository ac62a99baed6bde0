"""Attribution-evaluation campaigns with expected-accuracy bands.

Run remove-and-retrain (ROAR) or permute-and-retrain loops over a dataset,
score each iteration's model, and predict the next iteration's accuracy band
from the top feature's share of the attribution scores.
"""

from .attribution import (
    AttributionResult,
    Method,
    attribution_to_csv,
    linear_shap,
    most_significant,
    permutation_importance,
)
from .data import (
    Dataset,
    SyntheticLayout,
    SyntheticSpec,
    Task,
    balanced_subsample,
    dataset_digest,
    dataset_to_csv,
    drop_column,
    generate_synthetic,
    generate_synthetic_detailed,
    load_csv,
    pearson_matrix,
    replace_column,
)
from .eai_metric import EaiBand, compute_band, compute_fcp, within_band
from .errors import (
    CampaignError,
    DataError,
    ModelError,
    RoarbandError,
    UsageError,
    ZeroAttributionError,
)
from .models import (
    DEFAULT_HYPERPARAMETERS,
    FittedModel,
    default_score,
    fit,
    linear_predictor,
    model_to_text,
    predict,
    score_f1,
    score_r2,
)
from .proxy_engine import (
    CampaignReport,
    CampaignRow,
    IterationRecord,
    Mode,
    band_hit_rate,
    campaign_rows,
    campaign_to_csv,
    parse_campaign_csv,
    run_campaign,
)
from .report import (
    PlotSpec,
    campaign_trajectory,
    render_campaign_table,
    render_corr_csv,
    render_trajectory_svg,
)

__version__ = "0.1.0"
