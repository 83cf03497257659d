import asyncio
import logging
import threading
import time

import async_timeout

from os_aio_pod.utils import pydantic_dict
from os_vilenkin.builtin import BUILTIN_COMMANDS
from os_vilenkin.command import CommandManager, Outcome, Status
from os_vilenkin.config import RunConfig
from os_vilenkin.exceptions import CommandException, VilenkinException
from os_vilenkin.report import Report

WORKER_PREFIX = "vilenkin-worker"


class Engine(object):
    def __init__(self, config):
        if not isinstance(config, RunConfig):
            config = RunConfig(**pydantic_dict(config))
        self.config = config
        self.logger = logging.getLogger(self.__class__.__name__)
        self.slots = None
        self.cancelled = threading.Event()
        self.command_manager = CommandManager(self, BUILTIN_COMMANDS)
        self.outcome = None

    def _deliver(self, loop, future, setter, value):
        def settle():
            if not future.done():
                setter(value)

        try:
            loop.call_soon_threadsafe(settle)
        except RuntimeError:
            # loop closed after the run finished
            self.logger.debug(f"Dropped late result of {future}")

    def _work(self, loop, future, fn, args, kwargs):
        if self.cancelled.is_set():
            return
        try:
            result = fn(*args, **kwargs)
        except Exception as e:
            self._deliver(loop, future, future.set_exception, e)
        else:
            self._deliver(loop, future, future.set_result, result)

    async def call(self, fn, *args, **kwargs):
        """Run a pure library call on a daemon worker thread.

        At most ``config.workers`` calls run at once. Once the run is
        cancelled no queued call starts; a call already running is
        abandoned, not joined.
        """
        async with self.slots:
            if self.cancelled.is_set():
                raise asyncio.CancelledError()
            loop = asyncio.get_event_loop()
            future = loop.create_future()
            worker = threading.Thread(
                target=self._work,
                args=(loop, future, fn, args, kwargs),
                name=f"{WORKER_PREFIX}-{getattr(fn, '__name__', 'call')}",
                daemon=True,
            )
            worker.start()
            return await future

    async def map(self, fn, items):
        """fn over items on the worker threads; results in input order."""
        return list(await asyncio.gather(*[self.call(fn, item) for item in items]))

    def _config_echo(self):
        return pydantic_dict(self.config, exclude={"COMMANDS"})

    def _report(self, result, status, started):
        elapsed = (time.perf_counter() - started) * 1000.0
        return Report(
            command=self.config.command or "",
            config=self._config_echo(),
            result=result,
            status=status,
            elapsed_ms=elapsed if self.config.timing else None,
        )

    async def on_setup(self, name):
        self.logger.debug("On setup")
        self.cancelled.clear()
        self.slots = asyncio.Semaphore(self.config.workers)
        await self.command_manager.setup(name)
        self.logger.debug("On setup finished")

    async def on_cleanup(self, name):
        self.logger.debug("On cleanup")
        self.cancelled.set()
        await self.command_manager.cleanup(name)
        self.logger.debug("On cleanup finished")

    def _unavailable(self, name):
        if name in self.command_manager.failed:
            reason = self.command_manager.failed[name]
            return f"command {name!r} failed to load: {reason}"
        if name not in self.command_manager:
            return f"unknown command {name!r}"
        return None

    async def execute(self):
        started = time.perf_counter()
        name = self.config.command
        error = self._unavailable(name)
        if error:
            self.outcome = Outcome({"error": error}, Status.ERROR)
            return self._report(self.outcome.result, Status.ERROR, started)
        try:
            await self.on_setup(name)
            command = self.command_manager.get_command(name)
            async with async_timeout.timeout(self.config.time_limit):
                self.outcome = await command.run(self.config)
        except asyncio.TimeoutError:
            self.logger.error(f"Time limit exceeded, {self.config.time_limit}s")
            self.outcome = Outcome({"error": "time limit exceeded"}, Status.ERROR)
        except VilenkinException as e:
            self.logger.error(f"Command {name} failed, {e}")
            self.outcome = Outcome(
                {"error": str(e), "kind": e.__class__.__name__}, Status.ERROR
            )
        except Exception as e:
            exc = CommandException(f"unexpected failure in {name}", e)
            self.logger.error(f"{exc} {e!r}")
            self.outcome = Outcome({"error": str(exc), "cause": repr(e)}, Status.ERROR)
        finally:
            await self.on_cleanup(name)
        return self._report(self.outcome.result, self.outcome.status, started)

    def run(self):
        loop = asyncio.new_event_loop()
        try:
            return loop.run_until_complete(self.execute())
        finally:
            loop.close()


def run(config):
    return Engine(config).run()
