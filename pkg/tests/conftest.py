import json
from importlib import resources

import pytest

from incat.schema import FeatureSchema


@pytest.fixture(scope="session")
def schema():
    return FeatureSchema.default()


@pytest.fixture(scope="session")
def sample_feed_bytes():
    return resources.files("incat.data").joinpath("nvd_sample_feed.json").read_bytes()


@pytest.fixture(scope="session")
def malformed_feed_bytes():
    return resources.files("incat.data").joinpath("nvd_malformed_value.json").read_bytes()


def make_feed(items):
    """Minimal NVD 1.0 feed wrapper around prebuilt CVE_Items entries."""
    return json.dumps({"CVE_Items": items}).encode("utf-8")


def make_item(cve_id, description="Example flaw allows remote attackers to crash the service.",
              metrics=None, published="2018-06-01T10:00Z"):
    item = {
        "cve": {
            "CVE_data_meta": {"ID": cve_id},
            "description": {"description_data": [{"lang": "en", "value": description}]},
        },
        "publishedDate": published,
    }
    if metrics is not None:
        keys = (
            "attackVector", "attackComplexity", "privilegesRequired",
            "userInteraction", "confidentialityImpact", "integrityImpact",
            "availabilityImpact",
        )
        item["impact"] = {"baseMetricV3": {"cvssV3": dict(zip(keys, metrics))}}
    return item
