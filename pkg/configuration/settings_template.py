"""
Template for settings.py configuration file.
Copy this file to settings.py and adjust the simulator defaults.
Command-line flags still take precedence over anything set here.
"""

# "develop" or "production"
ENVIRONMENT = "develop"

# Runner used by `run` when --mode is not given: "sim", "seq" or "threads"
DEFAULT_MODE = "sim"

# Compute ticks a task may run per dispatch before rotation
DEFAULT_QUANTUM = 1

# Real milliseconds per simulated tick in threads mode
DEFAULT_TICK_MS = 1.0

# Diagnostics on standard error: "DEBUG", "INFO", "WARNING" or "ERROR"
LOG_LEVEL = "WARNING"
