from .JsonDataClass import JsonDataClass, NumpyEncoder
