"""Tests for erasure-rate-kit"""
