import pytest

from classifier_distance_probes.shared.run_config import RunSettings, load_config_file, merge_overlays, normalize_key
from classifier_distance_probes.shared.errors import SpecError

ENV_NAMES = ('DISTPROBE_OUTPUT_DIR', 'DISTPROBE_JOBS', 'DISTPROBE_LOG_LEVEL', 'DISTPROBE_MASTER_SEED')


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


class TestRunSettings:

    def test_defaults(self):
        settings = RunSettings()
        assert settings.get_info() == {'output_dir': 'runs', 'jobs': 1, 'log_level': 'INFO', 'master_seed': 0}

    def test_environment(self, monkeypatch):
        monkeypatch.setenv('DISTPROBE_OUTPUT_DIR', '/scratch/runs')
        monkeypatch.setenv('DISTPROBE_JOBS', '4')
        monkeypatch.setenv('DISTPROBE_LOG_LEVEL', 'debug')
        monkeypatch.setenv('DISTPROBE_MASTER_SEED', '17')
        settings = RunSettings()
        assert settings.output_dir == '/scratch/runs'
        assert settings.jobs == 4
        assert settings.log_level == 'DEBUG'
        assert settings.master_seed == 17

    def test_env_file(self, tmp_path, monkeypatch):
        env_file = tmp_path / 'probe.env'
        env_file.write_text('DISTPROBE_MASTER_SEED=23\n', encoding='utf-8')
        # registers the variable so teardown removes what the env file sets
        monkeypatch.setenv('DISTPROBE_MASTER_SEED', '0')
        monkeypatch.delenv('DISTPROBE_MASTER_SEED')
        assert RunSettings(str(env_file)).master_seed == 23

    @pytest.mark.parametrize('name, value, needle', [
        ('DISTPROBE_JOBS', '0', 'at least 1'),
        ('DISTPROBE_JOBS', 'two', 'integer'),
        ('DISTPROBE_MASTER_SEED', '-1', 'non-negative'),
        ('DISTPROBE_LOG_LEVEL', 'chatty', 'Unsupported log level'),
    ])
    def test_invalid_environment(self, monkeypatch, name, value, needle):
        monkeypatch.setenv(name, value)
        with pytest.raises(SpecError) as exc_info:
            RunSettings()
        assert needle in str(exc_info.value)


class TestConfigFiles:

    def test_load(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('# probe settings\ntrain-samples=200\nLABEL_SMOOTHING = 0.05\n--epochs=12\n', encoding='utf-8')
        assert load_config_file(str(path)) == {'train_samples': '200', 'label_smoothing': '0.05', 'epochs': '12'}

    def test_missing_value(self, tmp_path):
        path = tmp_path / 'run.cfg'
        path.write_text('epochs\n', encoding='utf-8')
        with pytest.raises(SpecError) as exc_info:
            load_config_file(str(path))
        assert 'epochs' in str(exc_info.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config_file(str(tmp_path / 'absent.cfg'))

    def test_normalize_key(self):
        assert normalize_key(' --Train-Samples ') == 'train_samples'


class TestMergeOverlays:

    def setup_class(self):
        self.defaults = {'epochs': 30, 'learning_rate': 0.05, 'clamp_filtered': False, 'model': 'auto', 'tags': []}

    def test_precedence(self):
        merged = merge_overlays({'epochs': 5, 'model': None}, {'epochs': '12', 'model': 'mlp'}, self.defaults)
        assert merged['epochs'] == 5
        assert merged['model'] == 'mlp'
        assert merged['learning_rate'] == 0.05

    def test_coercion(self):
        merged = merge_overlays({}, {'epochs': '12', 'learning_rate': '0.1', 'clamp_filtered': 'yes',
                                     'tags': 'a, b,'}, self.defaults)
        assert merged == {'epochs': 12, 'learning_rate': 0.1, 'clamp_filtered': True, 'model': 'auto',
                          'tags': ['a', 'b']}

    def test_errors(self):
        with pytest.raises(SpecError) as exc_info:
            merge_overlays({}, {'epochs': 'ten'}, self.defaults)
        assert 'epochs' in str(exc_info.value)
        with pytest.raises(SpecError) as exc_info:
            merge_overlays({}, {'colour': 'red'}, self.defaults)
        assert 'colour' in str(exc_info.value)
