from metabase.store import MetaBase, MetaExample, build_metabase, load_metabase, save_metabase

__all__ = ["MetaBase", "MetaExample", "build_metabase", "load_metabase", "save_metabase"]
