from typing import cast
try:
    from typing import Self
except ImportError:
    from typing_extensions import Self
import marshmallow_dataclass
import numpy as np
from dataclasses import asdict, is_dataclass
from json import JSONEncoder, dumps
from functools import singledispatchmethod


class NumpyEncoder(JSONEncoder):
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        return super().default(o)


class JsonDataClass:

    @singledispatchmethod
    @classmethod
    def load(cls, arg):
        raise TypeError('JsonDataClass.load() only accepts dicts and json strings')

    @load.register
    @classmethod
    def _(cls, data: str) -> Self:
        if is_dataclass(cls):
            schema = marshmallow_dataclass.class_schema(cls)()
            return cast(cls, schema.loads(data))
        else:
            raise TypeError('Only dataclasses should inherit from JsonDataClass!')

    @load.register
    @classmethod
    def _(cls, data: dict) -> Self:
        if is_dataclass(cls):
            schema = marshmallow_dataclass.class_schema(cls)()
            return cast(cls, schema.load(data))
        else:
            raise TypeError('Only dataclasses should inherit from JsonDataClass!')

    def asdict(self) -> dict:
        if is_dataclass(self):
            return asdict(self)
        else:
            raise TypeError('Only dataclasses should inherit from JsonDataClass!')

    def to_json(self, indent: int = None) -> str:
        return dumps(self.asdict(), cls=NumpyEncoder, sort_keys=True, indent=indent)
