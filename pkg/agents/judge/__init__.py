from .client import HttpJudgeClient, JudgeClient, JudgeResult, KeywordJudgeClient

__all__ = ["HttpJudgeClient", "JudgeClient", "JudgeResult", "KeywordJudgeClient"]
