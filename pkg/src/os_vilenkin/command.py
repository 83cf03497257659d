import logging
from collections import OrderedDict, namedtuple
from enum import Enum

from os_aio_pod.utils import pydantic_dict
from os_vilenkin.exceptions import CommandException


class Status(str, Enum):
    OK = "ok"
    VIOLATION = "violation-found"
    ERROR = "error"


class Outcome(namedtuple("Outcome", "result status table")):
    """What a command hands back: the payload, its status, optional CSV rows."""

    __slots__ = ()

    def __new__(cls, result, status=Status.OK, table=None):
        return super(Outcome, cls).__new__(cls, result, Status(status), table)

    @classmethod
    def check(cls, result, passed, table=None):
        return cls(result, Status.OK if passed else Status.VIOLATION, table)


class Command(object):
    name = None

    def __init__(self, engine, **kwargs):
        self.engine = engine
        self.logger = logging.getLogger(self.__class__.__name__)

    async def setup(self):
        pass

    async def run(self, config):
        raise NotImplementedError

    async def cleanup(self):
        pass


class CommandManager(object):
    """Builtin commands overlaid with the ``COMMANDS`` entries of the config.

    Only the command a run selects is set up and cleaned up; an entry whose
    class cannot be built is remembered in ``failed`` with its reason.
    """

    def __init__(self, engine, builtins=()):
        self.engine = engine
        self.commands = OrderedDict()
        self.failed = OrderedDict()
        self.active = []
        self.logger = logging.getLogger(self.__class__.__name__)
        for cls in builtins:
            self.commands[cls.name] = cls(engine)
        self.load_commands()

    def _load_command(self, conf):
        if conf.cls is None:
            if self.commands.pop(conf.name, None) is not None:
                self.logger.debug(f"Removed command {conf.name}")
            return
        kwargs = pydantic_dict(conf, exclude={"name", "cls"})
        try:
            command = conf.cls(self.engine, **kwargs)
        except Exception as e:
            self.logger.error(f"Cannot build command {conf.name} from {conf.cls}, {e}")
            self.commands.pop(conf.name, None)
            self.failed[conf.name] = f"{conf.cls.__name__}: {e}"
            return
        if conf.name in self.commands:
            self.logger.warning(f"Command {conf.name} replaced by {conf.cls}")
        self.failed.pop(conf.name, None)
        self.commands[conf.name] = command
        self.logger.debug(f"Loaded command {conf.name} from {conf.cls}")

    def load_commands(self):
        for conf in self.engine.config.COMMANDS:
            self._load_command(conf)

    def get_command(self, name):
        return self.commands[name]

    def __contains__(self, name):
        return name in self.commands

    async def setup(self, name):
        command = self.commands[name]
        try:
            await command.setup()
        except Exception as e:
            self.logger.error(f"Setup of {name} failed, {e!r}")
            raise CommandException(f"setup of {name} failed", e)
        self.active.append(name)
        self.logger.debug(f"Setup finished {name}")

    async def cleanup(self, name):
        if name not in self.active:
            return
        self.active.remove(name)
        try:
            await self.commands[name].cleanup()
        except Exception as e:
            self.logger.error(f"Cleanup of {name} failed, {e!r}")
            return
        self.logger.debug(f"Cleanup finished {name}")
