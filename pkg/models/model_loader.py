# models/model_loader.py
"""
Model Loader - discover the rate-equation models shipped in this package
"""

import importlib
from functools import lru_cache
from pathlib import Path
from typing import Dict, List

from core.errors import DomainError
from models.base_model import BaseModel

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__)
    return _logger


class ModelLoader:
    """Load and look up rate-equation models by name"""

    def __init__(self):
        self.models: Dict[str, BaseModel] = {}
        self.models_dir = Path(__file__).parent
        self.load_all_models()

    def load_all_models(self) -> int:
        """
        Import every model module in the package and register its model

        Returns:
            Number of models loaded
        """
        count = 0

        # All python files except base and loader
        model_files = sorted(
            f for f in self.models_dir.glob("*.py")
            if f.stem not in ['__init__', 'base_model', 'model_loader']
        )

        for model_file in model_files:
            if self.load_model(model_file.stem):
                count += 1

        get_logger().debug(f"Loaded {count} models: {', '.join(self.get_model_names())}")
        return count

    def load_model(self, module_name: str) -> bool:
        """
        Load the model defined in one module of this package

        Args:
            module_name: File name without .py

        Returns:
            True if a model was registered
        """
        module = importlib.import_module(f"models.{module_name}")

        for item_name in dir(module):
            item = getattr(module, item_name)
            if (isinstance(item, type) and
                    issubclass(item, BaseModel) and
                    item is not BaseModel and
                    item.__module__ == module.__name__):
                instance = item()
                self.models[instance.name] = instance
                return True

        get_logger().warning(f"No BaseModel subclass found in {module_name}")
        return False

    def get_model(self, name: str) -> BaseModel:
        """
        Get model instance by name

        Raises:
            DomainError: unknown model name
        """
        try:
            return self.models[name]
        except KeyError:
            known = ", ".join(self.get_model_names())
            raise DomainError(f"Unknown model '{name}' (known: {known})") from None

    def get_model_names(self) -> List[str]:
        """Names of all loaded models, sorted"""
        return sorted(self.models)


@lru_cache(maxsize=1)
def default_loader() -> ModelLoader:
    return ModelLoader()


def get_model(name: str) -> BaseModel:
    """Look up a model through the shared loader"""
    return default_loader().get_model(name)


def model_names() -> List[str]:
    return default_loader().get_model_names()
