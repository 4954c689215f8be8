"""Show every imputation strategy on one gappy feature column.

The same five rows are imputed under each strategy; the miss strategy throws
the values away and keeps only the missingness pattern, which is exactly what
the best-performing channel recipes feed to the network.
"""

import numpy as np

from sensorgrid.impute import (
    ChannelStrategy,
    ImputeStats,
    impute_matrix,
    parse_strategy_token,
)
from sensorgrid.schema import FEATURE_COUNT

values = np.full((5, FEATURE_COUNT), np.nan)
mask = np.ones((5, FEATURE_COUNT), dtype=np.uint8)
column = [None, 5.0, None, 7.0, 2.0]
for i, v in enumerate(column):
    if v is not None:
        values[i, 0] = v
        mask[i, 0] = 0

stats = ImputeStats((4.5,) + (0.0,) * (FEATURE_COUNT - 1))

print(f"input column (None = missing): {column}\n")
for strategy in (ChannelStrategy.CONST_NEG, ChannelStrategy.CONST_POS,
                 ChannelStrategy.MISS, ChannelStrategy.FILL,
                 ChannelStrategy.MEDIAN_MODE):
    out = impute_matrix(values, mask, strategy, stats)
    print(f"  {strategy:>7}: {out[:, 0].tolist()}")

print("\nChannel recipes compose strategies per channel:")
for token in ("miss3", "fill2|miss1", "-const2|miss1", "mm3"):
    print(f"  {token:>14} -> {parse_strategy_token(token)}")
