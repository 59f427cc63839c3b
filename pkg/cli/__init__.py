"""MOTOR command-line interface module"""
