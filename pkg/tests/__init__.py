"""Tests for stancekit."""
