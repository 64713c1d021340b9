"""Tests for ffnets."""
