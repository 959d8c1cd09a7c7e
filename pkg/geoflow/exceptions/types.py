"""常见异常类型"""

from geoflow.exceptions.base import GeoflowError


class ConfigurationError(GeoflowError):
    """配置或用法错误"""

    default_module = "cli"
    default_message = "配置无效"


class DomainError(GeoflowError):
    """点或曲线超出坐标卡定义域"""

    default_module = "geometry"
    default_message = "点超出坐标卡定义域"


class PreconditionError(GeoflowError):
    """调用前置条件不满足"""

    default_message = "前置条件不满足"


class TangencyError(PreconditionError):
    """截面坐标 θ 超出切向保护范围"""

    default_module = "section"
    default_message = "θ 超出切向保护范围"


class NumericalError(GeoflowError):
    """数值退化 (度量退化、非有限值)"""

    default_message = "数值计算失败"


class StiffnessError(NumericalError):
    """积分步长下溢"""

    default_module = "flow"
    default_message = "积分步长下溢"


class HorizonError(GeoflowError):
    """时间上限内没有找到所需事件"""

    default_module = "section"
    default_message = "时间上限内未找到穿越"


class OrbitEscapeError(GeoflowError):
    """非紧曲面上轨道越过声明的边界"""

    default_module = "flow"
    default_message = "轨道越过声明边界"


class ConstructionError(GeoflowError):
    """对象构造失败 (非简单闭测地线等)"""

    default_module = "section"
    default_message = "构造失败"
