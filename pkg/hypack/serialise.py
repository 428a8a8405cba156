import json
import logging

from hypack.rational import number_to_json


LOG = logging.getLogger(__name__)


class Serialiser:
    def to_dict(self):
        raise NotImplementedError

    @classmethod
    def from_dict(cls, d):
        raise NotImplementedError

    def to_json(self, fp=None, **kwargs):
        kwargs.setdefault("sort_keys", True)
        if fp:
            json.dump(self.to_dict(), fp, indent=2, **kwargs)
        else:
            return json.dumps(self.to_dict(), indent=2, **kwargs)

    @classmethod
    def from_json(cls, js, **kwargs):
        if isinstance(js, str):
            d = json.loads(js, **kwargs)
        else:
            d = json.load(js, **kwargs)
        return cls.from_dict(d)


def jsonable(value):
    """Recursively convert exact numbers, tuples and models to JSON types."""
    if hasattr(value, "to_dict"):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(item) for item in value]
    if isinstance(value, (str, bool, int)) or value is None:
        return value
    return number_to_json(value)


def dump_json(data, path):
    """Write a JSON document deterministically (sorted keys, trailing newline)."""
    text = json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n"
    with open(path, "w") as fp:
        fp.write(text)
    LOG.info("Wrote %s", path)
    return text
