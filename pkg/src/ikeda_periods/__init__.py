"""Exact verification of the Ikeda period identity for Miyawaki lifts of genus 3."""

__version__ = "0.1.0"
