"""MOTOR re-ranking tests"""
