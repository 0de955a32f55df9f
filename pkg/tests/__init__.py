"""Tests for qsense."""
