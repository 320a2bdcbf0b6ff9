from features.meta_features import FEATURE_NAMES, FeatureConfig, MetaFeatureVector, extract_meta_features

__all__ = ["FEATURE_NAMES", "FeatureConfig", "MetaFeatureVector", "extract_meta_features"]
