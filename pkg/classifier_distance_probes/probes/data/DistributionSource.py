from dataclasses import dataclass
from typing import List, Optional

from classifier_distance_probes.synth.data import DistributionSpec
from classifier_distance_probes.shared.models import JsonDataClass
from classifier_distance_probes.shared.errors import SpecError

SOURCE_KINDS = ('synth', 'dir')
BLOB_TASK_AMPLITUDE = 0.8
BLOB_TASK_SIZE = 16


@dataclass
class DistributionSource(JsonDataClass):
    """A named sample source: an in-memory synthetic spec or a dataset directory.

    A directory source points either at a distribution directory holding ``train/`` and ``val/``
    or at a dataset root containing ``<name>/train`` and ``<name>/val``.
    """
    name: str
    kind: str
    spec: Optional[DistributionSpec] = None
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise SpecError(f"Unsupported source kind '{self.kind}'. Supported kinds: {', '.join(SOURCE_KINDS)}")
        if self.kind == 'synth' and self.spec is None:
            raise SpecError(f"Synthetic source '{self.name}' needs a distribution spec")
        if self.kind == 'dir' and not self.path:
            raise SpecError(f"Directory source '{self.name}' needs a path")

    @classmethod
    def synthetic(cls, spec: DistributionSpec) -> 'DistributionSource':
        return cls(name=spec.name, kind='synth', spec=spec)

    @classmethod
    def directory(cls, name: str, path: str) -> 'DistributionSource':
        return cls(name=name, kind='dir', path=path)

    def describe(self) -> str:
        if self.kind == 'dir':
            return f'{self.name}=dir:{self.path}'
        return f'{self.name}=synth:{self.spec.family}'


def blob_task_sources(amplitude: float = BLOB_TASK_AMPLITUDE, size: int = BLOB_TASK_SIZE) -> List[DistributionSource]:
    """The default mix_eval task: three blob_image classes with the same expected mean image.

    Class k carries 2^k bumps of height amplitude/2^k, all centred on the image with the same
    position spread, so only the bump count separates the classes.
    """
    centre = size / 2.0 - 0.5
    sources = []
    for name, count in (('one_bump', 1), ('two_bumps', 2), ('four_bumps', 4)):
        spec = DistributionSpec(name=name, family='blob_image', height=size, width=size, count=count,
                                amplitude=amplitude / count, blob_width=1.5, background=0.1, pixel_noise=0.05,
                                weights=[1.0], means=[[centre, centre]],
                                covs=[[[(size / 5.0) ** 2, 0.0], [0.0, (size / 5.0) ** 2]]])
        sources.append(DistributionSource.synthetic(spec))
    return sources
