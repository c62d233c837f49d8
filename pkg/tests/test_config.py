import pytest

from apnorm.errors import ConfigError
from apnorm.lab import config
from apnorm.lab.config import ExperimentConfig, load_config, parse_config

CANTOR = """
# cantor primitive at alpha = 1/2
modulus.kind = power
modulus.alpha = 0.5
phase.kind = cantor
lambda.min = 64
lambda.max = 4096
lambda.count = 13
p = 1, 1.2, 1.8
"""


class TestParse:
    def test_example(self):
        cfg = parse_config(CANTOR, "cantor.cfg")
        assert cfg.source == "cantor.cfg"
        assert cfg.phase_kind == "cantor"
        assert cfg.modulus == {"alpha": 0.5}
        assert cfg.lam_count == 13
        assert cfg.ps == (1.0, 1.2, 1.8)

    def test_defaults(self):
        cfg = parse_config("phase.kind = cos")
        defaults = ExperimentConfig()
        assert cfg.engine == defaults.engine == "auto"
        assert cfg.lam_integer == "auto"
        assert cfg.witness_ps == (1.0, 1.2)
        assert cfg.output_csv is None

    def test_comments_and_blank_lines(self):
        cfg = parse_config("\n\n  # nothing\nseed = 7   # trailing\n")
        assert cfg.seed == 7

    def test_phase_alpha_alias(self):
        cfg = parse_config("phase.kind = cantor\nphase.alpha = 0.4")
        assert cfg.modulus["alpha"] == 0.4
        assert "alpha" not in cfg.phase

    def test_modulus_alpha_wins_over_alias(self):
        cfg = parse_config("modulus.alpha = 0.3\nphase.alpha = 0.4")
        assert cfg.modulus["alpha"] == 0.3

    def test_choices_are_case_insensitive(self):
        assert parse_config("engine = DFT").engine == "dft"

    def test_integer_accepts_float_spelling(self):
        assert parse_config("lambda.count = 5.0").lam_count == 5

    def test_load_from_file(self, write_config):
        path = write_config("phase.kind = cos\n")
        assert load_config(path).source == str(path)


class TestErrors:
    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("seed = 1\nbogus = 2", 2, "unknown key"),
            ("seed = 1\nseed = 2", 2, "duplicate key"),
            ("phase.kind", 1, "expected 'key = value'"),
            ("p =", 1, "missing value"),
            ("lambda.count = 2.5", 1, "invalid value"),
            ("phase.kind = spiral", 1, "not one of"),
            ("p = 1,,2", 1, "comma separated"),
            ("\nlambda.min = 1", 2, "lambda.min must be >= 2"),
            ("lambda.min = 100\nlambda.max = 50", 2, "lambda.max must exceed"),
            ("p = 1, 2.5", 1, "[1, 2]"),
            ("witness.p = 0.5", 1, "[1, 2]"),
            ("dft.oversample = 2", 1, "oversample"),
            ("threads = -1", 1, "threads"),
            ("modulus.kind = power-log", 1, "beta"),
            ("modulus.kind = tabulated\nmodulus.nodes = 1, 2", 1, "tabulated"),
            ("phase.kind = pl\nphase.values = 0, 1", 1, "breakpoints"),
            ("phase.kind = diffeo\nphase.base = pl", 2, "breakpoints"),
            ("output.plot = a.svg", 1, "output.csv"),
            ("phase.kind = linear", 1, "phase.slope"),
            ("phase.kind = nested\nphase.head_weight = 1", 2, "head_weight"),
            ("phase.kind = nested\nphase.levels = 0", 2, "levels"),
            ("phase.depth = 0", 1, "depth"),
            ("witness.lambdas = 1, 64", 1, "witness.lambdas"),
        ],
    )
    def test_location_and_message(self, text, line, fragment):
        with pytest.raises(ConfigError) as info:
            parse_config(text, "exp.cfg")
        assert info.value.source == "exp.cfg"
        assert info.value.line == line
        assert str(info.value).startswith(f"exp.cfg:{line}: ")
        assert fragment in str(info.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError) as info:
            load_config(tmp_path / "absent.cfg")
        assert info.value.line is None
        assert "cannot read config" in str(info.value)

    def test_known_keys(self):
        assert "witness.lambdas" in config._KEYS
        assert set(config.PHASE_KINDS) >= set(config.DIFFEO_BASES)
