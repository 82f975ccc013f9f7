from .client import EmbeddingClient, HashingEmbedder, HttpEmbeddingClient, cosine_similarity

__all__ = ["EmbeddingClient", "HashingEmbedder", "HttpEmbeddingClient", "cosine_similarity"]
