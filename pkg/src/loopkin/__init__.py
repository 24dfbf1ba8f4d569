"""loopkin — kinematics for closed-chain robots driven by linear actuators."""

__version__ = "0.1.0"
