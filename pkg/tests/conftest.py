from __future__ import annotations

import pytest

from tonality import Lexicon


@pytest.fixture
def planted_lexicon() -> Lexicon:
    """Ten positive and ten negative hand-weighted words, default params."""
    positive = {f"plus{i:02d}": 0.9 for i in range(10)}
    negative = {f"minus{i:02d}": 0.9 for i in range(10)}
    return Lexicon.build(positive, negative)
