"""Utility components"""
