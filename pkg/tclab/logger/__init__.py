from .message import bot
