import pytest

from litmon.names import normalize_author_name
from litmon.textutil import fold_diacritics, normalize_doi, slugify


@pytest.mark.parametrize("raw,display,key", [
    ("Ashby, M. F.", "Ashby, M. F.", "ashby_mf"),
    ("Yves Bréchet", "Bréchet, Y.", "brechet_y"),
    ("Cebon, D.", "Cebon, D.", "cebon_d"),
    ("Bontempi, E.", "Bontempi, E.", "bontempi_e"),
    ("Maria del Carmen García", "García, M. C.", "garcia_mc"),
    ("Ludwig van Beethoven", "van Beethoven, L.", "vanbeethoven_l"),
    ("O'Neill, Sean", "O'Neill, S.", "oneill_s"),
    ("Müller, Hans-Peter", "Müller, H. P.", "muller_hp"),
])
def test_normalize_author_name(raw, display, key):
    result = normalize_author_name(raw)
    assert result.display_name == display
    assert result.canonical_key == key
    assert result.parse_warning is None


def test_single_token_kept_with_warning():
    result = normalize_author_name("Cher")
    assert result.display_name == "Cher"
    assert result.canonical_key == "cher"
    assert result.parse_warning is not None


def test_empty_name_warns():
    assert normalize_author_name("  ").parse_warning is not None


def test_diacritics_fold_only_in_key():
    result = normalize_author_name("Søren Kierkegaard")
    assert "ø" not in result.canonical_key
    assert result.display_name == "Kierkegaard, S."


@pytest.mark.parametrize("raw,expected", [
    ("10.1000/xyz123", "10.1000/xyz123"),
    ("10.1000/XYZ123", "10.1000/xyz123"),
    ("https://doi.org/10.1000/abc", "10.1000/abc"),
    ("doi:10.1000/abc", "10.1000/abc"),
    ("http://dx.doi.org/10.1000/a.b/c", "10.1000/a.b/c"),
    ("not-a-doi", None),
    ("10.9/too-short-prefix", None),
    ("", None),
    (None, None),
])
def test_normalize_doi(raw, expected):
    assert normalize_doi(raw) == expected


def test_fold_diacritics():
    assert fold_diacritics("Bréchet Müller Søren łódź ß") == \
        "Brechet Muller Soren lodz ss"


def test_slugify():
    assert slugify("CES EduPack") == "ces_edupack"
    assert slugify("  ANSYS Mechanical!  ") == "ansys_mechanical"
