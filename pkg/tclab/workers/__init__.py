from .worker import Workers
