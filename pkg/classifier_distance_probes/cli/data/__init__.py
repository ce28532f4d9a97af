from .RunConfig import RunConfig
