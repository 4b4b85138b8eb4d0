"""Dynamic tool registry for loading the command verbs."""

import importlib
import inspect
import logging
from pathlib import Path

from app.core.base_tool import BaseTool

logger = logging.getLogger(__name__)

TOOLS_DIR = Path(__file__).parent.parent / "tools"


class ToolRegistry:
    """Registry for dynamically loading and managing tools."""

    def __init__(self):
        self._tools: dict[str, BaseTool] = {}

    def discover_tools(self, tools_dir: Path = TOOLS_DIR) -> None:
        """Load every ``*_tool.py`` module in ``tools_dir``.

        Args:
            tools_dir: Path to the tools directory

        """
        if not tools_dir.exists():
            logger.warning(f"Tools directory does not exist: {tools_dir}")
            return

        for tool_file in sorted(f for f in tools_dir.glob("*_tool.py") if f.is_file()):
            try:
                self._load_tool_from_file(tool_file)
            except Exception as e:
                logger.exception(f"Failed to load tool from {tool_file}: {e}")

    def _load_tool_from_file(self, tool_file: Path) -> None:
        module_name = f"app.tools.{tool_file.stem}"
        module = importlib.import_module(module_name)

        # only classes defined in the module itself, not imported bases
        for _name, obj in inspect.getmembers(module, inspect.isclass):
            if issubclass(obj, BaseTool) and not inspect.isabstract(obj) and obj.__module__ == module_name:
                tool_instance = obj()
                self._tools[tool_instance.name] = tool_instance
                logger.debug(f"Loaded tool: {tool_instance.name}")

    def get_tool(self, tool_name: str) -> BaseTool | None:
        """Get a tool instance by name."""
        if not self._tools:
            self.discover_tools()
        return self._tools.get(tool_name)

    def get_all_tools(self) -> dict[str, BaseTool]:
        """Get all registered tools."""
        return self._tools.copy()

    def list_tool_names(self) -> list[str]:
        """Get list of all tool names."""
        return list(self._tools.keys())


# Global registry instance
registry = ToolRegistry()
